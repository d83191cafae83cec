use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use singular_bgg::complex::{
    assign_signs, cut_equalities, is_kostant, regular_skeleton, s_category_has_bgg, singular_skeleton,
    translate_skeleton, ComplexSkeleton,
};
use singular_bgg::export::{emit_dot, emit_table, format_word, to_json, BlockReport, Format, SkeletonJson};
use singular_bgg::klv::klv_dominant;
use singular_bgg::mobius::{mobius_lambda, support_x};
use singular_bgg::weyl::element_budget_from_env;
use singular_bgg::{CartanType, Element, Error, Family, KLTable, Result, SingularBlock, WeylGroup};

#[derive(Parser)]
#[command(name = "bgg", version, about = "Singular BGG complexes and Kostant modules of finite Weyl groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the non-Kostant longest representatives of one block
    Nonkostant(BlockArgs),
    /// Non-Kostant table over every singular set
    Blocks(GroupArgs),
    /// Kazhdan-Lusztig polynomial P_{y,w}
    Klpoly {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_parser = parse_list)]
        y: IndexList,
        #[arg(long, value_parser = parse_list)]
        w: IndexList,
    },
    /// Singular KLV polynomial attached to longest representatives w <= x
    Klv(PairArgs),
    /// Restricted Moebius function on longest representatives
    Mobius(PairArgs),
    /// Skeleton of the BGG complex of w
    Complex {
        #[command(flatten)]
        block: BlockArgs,
        #[arg(long, value_parser = parse_list)]
        w: IndexList,
        #[arg(long, value_enum, default_value_t = Stage::Singular)]
        kind: Stage,
        /// Assign square signs to regular and translated skeletons
        #[arg(long)]
        signed: bool,
    },
    /// Decide whether the simple module of w is Kostant
    Kostant(ElementArgs),
    /// Decide whether the S-subcategory simple of w has a BGG resolution
    Scat(ElementArgs),
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// Cartan family: A, B, C, D, E, F or G
    #[arg(long = "type")]
    family: char,
    #[arg(long)]
    rank: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Worker threads for table construction and block scans
    #[arg(long)]
    threads: Option<usize>,
    /// Kazhdan-Lusztig table cache; read when present, written otherwise
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct BlockArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Singular simple roots, 1-based, comma or space separated
    #[arg(long, value_parser = parse_list, default_value = "")]
    singular: IndexList,
}

#[derive(Args, Clone)]
struct ElementArgs {
    #[command(flatten)]
    block: BlockArgs,
    #[arg(long, value_parser = parse_list)]
    w: IndexList,
}

#[derive(Args, Clone)]
struct PairArgs {
    #[command(flatten)]
    block: BlockArgs,
    #[arg(long, value_parser = parse_list)]
    w: IndexList,
    #[arg(long, value_parser = parse_list)]
    x: IndexList,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    Regular,
    Translated,
    Singular,
}

/// Comma or space separated indices; a bare digit string such as `3232` is
/// read one digit per generator.
#[derive(Clone, Debug)]
struct IndexList(Vec<usize>);

fn parse_list(s: &str) -> std::result::Result<IndexList, String> {
    split_list(s).map(IndexList)
}

fn split_list(s: &str) -> std::result::Result<Vec<usize>, String> {
    let s = s.trim();
    if s.is_empty() || s == "e" {
        return Ok(Vec::new());
    }
    let tokens: Vec<&str> = s.split([',', ' ']).filter(|t| !t.is_empty()).collect();
    if tokens.len() == 1 && tokens[0].len() > 1 && tokens[0].chars().all(|c| c.is_ascii_digit()) {
        return Ok(tokens[0].chars().map(|c| c as usize - '0' as usize).collect());
    }
    tokens
        .iter()
        .map(|t| t.parse::<usize>().map_err(|_| format!("{t:?} is not a generator index")))
        .collect()
}

struct Context {
    group: Arc<WeylGroup>,
    budget: usize,
    format: OutputFormat,
    cache: Option<PathBuf>,
}

impl Context {
    fn new(args: &GroupArgs) -> Result<Self> {
        let budget = element_budget_from_env()?;
        let cartan = CartanType::new(Family::from_letter(args.family)?, args.rank)?;
        let group = WeylGroup::build_with_budget(cartan, budget)?;
        if !group.is_enumerated() {
            return Err(Error::Resource(format!(
                "{cartan} has {} elements, budget is {budget}; raise BGG_ELEMENT_BUDGET",
                cartan.group_order()
            )));
        }
        Ok(Context {
            group: Arc::new(group),
            budget,
            format: args.format,
            cache: args.cache.clone(),
        })
    }

    fn table(&self) -> Result<KLTable> {
        match &self.cache {
            Some(path) if path.exists() => KLTable::read_cache(self.group.clone(), std::fs::File::open(path)?),
            Some(path) => {
                let t = KLTable::build_with_budget(self.group.clone(), self.budget)?;
                let file = std::io::BufWriter::new(std::fs::File::create(path)?);
                t.write_cache(file)?;
                Ok(t)
            }
            None => KLTable::build_with_budget(self.group.clone(), self.budget),
        }
    }

    fn block(&self, singular: &[usize]) -> Result<SingularBlock> {
        SingularBlock::new(self.group.clone(), singular)
    }

    fn element(&self, word: &[usize]) -> Result<Element> {
        self.group.from_word(word)
    }

    fn word(&self, w: &Element) -> Vec<usize> {
        self.group.reduced_word(w)
    }

    fn text_word(&self, w: &Element) -> String {
        format_word(&self.group, &self.word(w))
    }

    fn json_header(&self, singular: &[usize]) -> serde_json::Map<String, serde_json::Value> {
        let cartan = self.group.cartan();
        let mut m = serde_json::Map::new();
        m.insert("cartan".into(), json!(cartan.family().letter().to_string()));
        m.insert("rank".into(), json!(cartan.rank()));
        m.insert("singular".into(), json!(singular));
        m
    }
}

fn group_args(cmd: &Command) -> &GroupArgs {
    match cmd {
        Command::Nonkostant(b) => &b.group,
        Command::Blocks(g) => g,
        Command::Klpoly { group, .. } => group,
        Command::Klv(p) | Command::Mobius(p) => &p.block.group,
        Command::Complex { block, .. } => &block.group,
        Command::Kostant(e) | Command::Scat(e) => &e.block.group,
    }
}

fn subsets(rank: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0u32..1 << rank)
        .map(|m| (1..=rank).filter(|&i| m >> (i - 1) & 1 == 1).collect())
        .collect();
    all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    all
}

fn table_output(ctx: &Context, reports: &[BlockReport]) -> Result<String> {
    match ctx.format {
        OutputFormat::Json if reports.len() == 1 => Ok(to_json(&reports[0])),
        OutputFormat::Json => emit_table(&ctx.group, reports, Format::Json),
        _ => emit_table(&ctx.group, reports, Format::Text),
    }
}

fn flag_output(ctx: &Context, singular: &[usize], w: &Element, key: &str, value: bool) -> String {
    match ctx.format {
        OutputFormat::Json => {
            let mut m = ctx.json_header(singular);
            m.insert("w".into(), json!(ctx.word(w)));
            m.insert(key.into(), json!(value));
            to_json(&m)
        }
        _ => format!("{value}\n"),
    }
}

fn skeleton_text(ctx: &Context, sk: &ComplexSkeleton) -> String {
    let g = &ctx.group;
    let mut out = String::new();
    let top = sk.vertices().last().map_or(0, |&(_, d)| d);
    for d in 0..=top {
        let words: Vec<String> = sk
            .vertices()
            .iter()
            .filter(|&&(_, dv)| dv == d)
            .map(|&(v, _)| format_word(g, &g.reduced_word(&g.element(v).expect("vertex index"))))
            .collect();
        writeln!(out, "degree {d}: {}", words.join(" ")).unwrap();
    }
    for e in sk.edges() {
        let name = |i: usize| format_word(g, &g.reduced_word(&g.element(i).expect("edge index")));
        let arrow = match e.kind {
            singular_bgg::EdgeKind::Morphism => "->",
            singular_bgg::EdgeKind::Equality => "==",
        };
        let sign = match e.sign {
            Some(s) if s > 0 => " (+)",
            Some(_) => " (-)",
            None => "",
        };
        writeln!(out, "{} {arrow} {}{sign}", name(e.from), name(e.to)).unwrap();
    }
    out
}

fn run(cmd: Command) -> Result<String> {
    let ctx = Context::new(group_args(&cmd))?;
    match cmd {
        Command::Nonkostant(args) => {
            let t = ctx.table()?;
            let report = BlockReport::compute(&t, &ctx.block(&args.singular.0)?)?;
            table_output(&ctx, &[report])
        }
        Command::Blocks(_) => {
            let t = ctx.table()?;
            let reports = subsets(ctx.group.rank())
                .iter()
                .map(|s| BlockReport::compute(&t, &ctx.block(s)?))
                .collect::<Result<Vec<_>>>()?;
            table_output(&ctx, &reports)
        }
        Command::Klpoly { y, w, .. } => {
            let t = ctx.table()?;
            let (y, w) = (ctx.element(&y.0)?, ctx.element(&w.0)?);
            let p = t.kl_polynomial(&y, &w)?;
            Ok(match ctx.format {
                OutputFormat::Json => {
                    let mut m = ctx.json_header(&[]);
                    m.insert("y".into(), json!(ctx.word(&y)));
                    m.insert("w".into(), json!(ctx.word(&w)));
                    m.insert("coeffs".into(), json!(p.coeffs()));
                    m.insert("mu".into(), json!(t.mu_coefficient(&y, &w)?));
                    to_json(&m)
                }
                _ => format!("{p}\n"),
            })
        }
        Command::Klv(args) => {
            let t = ctx.table()?;
            let b = ctx.block(&args.block.singular.0)?;
            let (w, x) = (ctx.element(&args.w.0)?, ctx.element(&args.x.0)?);
            let p = klv_dominant(&t, &b, &w, &x)?;
            Ok(match ctx.format {
                OutputFormat::Json => {
                    let mut m = ctx.json_header(b.singular());
                    m.insert("w".into(), json!(ctx.word(&w)));
                    m.insert("x".into(), json!(ctx.word(&x)));
                    m.insert("coeffs".into(), json!(p.coeffs()));
                    to_json(&m)
                }
                _ => format!("{p}\n"),
            })
        }
        Command::Mobius(args) => {
            let b = ctx.block(&args.block.singular.0)?;
            let (w, x) = (ctx.element(&args.w.0)?, ctx.element(&args.x.0)?);
            let mu = mobius_lambda(&w, &x, &b)?;
            Ok(match ctx.format {
                OutputFormat::Json => {
                    let mut m = ctx.json_header(b.singular());
                    m.insert("w".into(), json!(ctx.word(&w)));
                    m.insert("x".into(), json!(ctx.word(&x)));
                    m.insert("mu".into(), json!(mu));
                    to_json(&m)
                }
                _ => format!("{mu}\n"),
            })
        }
        Command::Complex { block, w, kind, signed } => {
            let b = ctx.block(&block.singular.0)?;
            let w = ctx.element(&w.0)?;
            let sk = match kind {
                Stage::Singular => singular_skeleton(&w, &b)?,
                Stage::Regular | Stage::Translated => {
                    let mut sk = regular_skeleton(&ctx.group, &w)?;
                    if signed {
                        sk = assign_signs(&sk)?;
                    }
                    if matches!(kind, Stage::Translated) {
                        sk = translate_skeleton(&sk, &b)?;
                    }
                    sk
                }
            };
            if matches!(kind, Stage::Singular) && b.is_max_rep(&w)? {
                // the cut-off pipeline must land on the same graph
                let cut = cut_equalities(&translate_skeleton(&regular_skeleton(&ctx.group, &w)?, &b)?)?;
                if cut.unsigned_edges() != sk.unsigned_edges() || cut.vertices() != sk.vertices() {
                    return Err(Error::Internal("cut-off pipeline disagrees with the direct construction".into()));
                }
            }
            Ok(match ctx.format {
                OutputFormat::Dot => emit_dot(&sk),
                OutputFormat::Json => to_json(&SkeletonJson::from_skeleton(&sk)),
                OutputFormat::Text => skeleton_text(&ctx, &sk),
            })
        }
        Command::Kostant(args) => {
            let t = ctx.table()?;
            let b = ctx.block(&args.block.singular.0)?;
            let w = ctx.element(&args.w.0)?;
            let value = is_kostant(&w, &b, &t)?;
            if matches!(ctx.format, OutputFormat::Text) {
                let support = support_x(&w, &b)?;
                let strata: Vec<String> = support
                    .strata
                    .iter()
                    .map(|s| s.iter().map(|wd| format_word(&ctx.group, wd)).collect::<Vec<_>>().join(" "))
                    .collect();
                return Ok(format!("{value}\nw = {}\nX_w = {}\n", ctx.text_word(&w), strata.join(" | ")));
            }
            Ok(flag_output(&ctx, b.singular(), &w, "kostant", value))
        }
        Command::Scat(args) => {
            let t = ctx.table()?;
            let b = ctx.block(&args.block.singular.0)?;
            let w = ctx.element(&args.w.0)?;
            let value = s_category_has_bgg(&w, &b, &t)?;
            Ok(flag_output(&ctx, b.singular(), &w, "bgg_resolution", value))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let threads = group_args(&cli.command).threads;
    let result = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| run(cli.command)),
            Err(e) => Err(Error::Resource(format!("cannot start {n} worker threads: {e}"))),
        },
        None => run(cli.command),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("bgg: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
