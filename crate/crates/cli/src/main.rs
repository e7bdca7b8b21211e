use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use torsi::census::{self, CensusError};
use torsi::extremal::{self, bound_report, exact_square_si, PANTS_VALIDATED_MAX};
use torsi::surgery::{self, Rule};
use torsi::verify::Suite;
use torsi::{
    find_opposite_corner_pairs, intersection_number, multiword_si, parse_word,
    reduce_to_two_blockpairs, self_intersection, surgery_reversed, surgery_same,
    CyclicWord, Letter, Orientation, Surface, SurfaceOrder, TableFormat,
};

/// Exit status for failed verification suites and pants self-tests.
const EXIT_FAILED: u8 = 1;
/// Exit status for bad arguments and malformed words.
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "torsi", version, about = "Self-intersection numbers of curves on the punctured torus and pair of pants")]
struct Cli {
    #[command(flatten)]
    config: CliConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CliConfig {
    #[arg(long, global = true, value_enum, default_value_t = SurfaceArg::Torus)]
    surface: SurfaceArg,
    /// Cyclic order of the four directions at the basepoint, e.g. aAbB. Overrides the surface ring.
    #[arg(long, global = true)]
    ring: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Worker threads; 0 or unset means one per core.
    #[arg(long, global = true, env = "TORSI_THREADS")]
    threads: Option<usize>,
    /// Allow pants computations beyond the validated length range.
    #[arg(long, global = true)]
    force_unvalidated: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SurfaceArg {
    Torus,
    Pants,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// Self-intersection number of a cyclic word.
    Si { word: String },
    /// Intersection number of two distinct primitive classes.
    In { w1: String, w2: String },
    /// Cross-corner surgeries at opposite corner pairs.
    Surgery {
        word: String,
        /// Restrict to the sites `i,j` of the canonical spelling.
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
    },
    /// Surgery sequence down to at most two block-pairs.
    Reduce { word: String },
    /// Distinct reduced cyclic words of one length.
    Enumerate {
        #[arg(long)]
        length: usize,
        /// Print the self-intersection histogram instead of the words.
        #[arg(long)]
        histogram: bool,
        /// Include proper powers.
        #[arg(long)]
        all: bool,
    },
    /// Census table of self-intersection counts for lengths 1..=max.
    Table {
        #[arg(long)]
        max: usize,
    },
    /// Extremal counts and words for one length.
    Extremal {
        #[arg(long)]
        length: usize,
        /// List the maximal and submaximal words.
        #[arg(long)]
        words: bool,
    },
    /// Self-intersection together with the tightest upper bound.
    Bound { word: String },
    /// Least length admitting a class with at least k self-intersections.
    MinLength { k: u64 },
    /// Runs a verification suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
    },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s.split_once(',').ok_or("expected i,j")?;
    let p = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((p(i)?, p(j)?))
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite {s:?}; expected one of {}", names.join(", "))
    })
}

/// An error with the exit status it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_USAGE, message: e.to_string() }
}

struct Ctx {
    surface: Surface,
    order: SurfaceOrder,
    format: Format,
    force: bool,
}

impl Ctx {
    fn label(&self) -> String {
        if self.order == self.surface.order() {
            self.surface.name().to_string()
        } else {
            format!("{}:{}", self.surface.name(), self.order)
        }
    }

    fn guard_length(&self, length: usize) -> Result<(), Failure> {
        if self.surface == Surface::Pants && length > PANTS_VALIDATED_MAX && !self.force {
            return Err(usage(CensusError::UnvalidatedLength(length)));
        }
        Ok(())
    }

    fn table_format(&self) -> TableFormat {
        match self.format {
            Format::Csv => TableFormat::Csv,
            Format::Json => TableFormat::Json,
            Format::Plain => TableFormat::Plain,
        }
    }
}

fn parse_ring(text: &str) -> Result<SurfaceOrder, Failure> {
    let letters: Vec<Letter> = text
        .chars()
        .map(|c| Letter::from_char(c).ok_or_else(|| usage(format!("illegal ring letter {c:?}"))))
        .collect::<Result<_, _>>()?;
    let ring: [Letter; 4] = letters.try_into().map_err(|_| usage("a ring lists exactly four letters"))?;
    SurfaceOrder::new(ring).map_err(usage)
}

fn word(text: &str) -> Result<CyclicWord, Failure> {
    parse_word(text).map_err(|e| usage(format!("{text:?}: {e}")))
}

fn rule_name(rule: Rule) -> &'static str {
    match rule {
        Rule::Reversed => "reversed",
        Rule::Split => "split",
        Rule::Merge => "merge",
        Rule::Substitution => "substitution",
    }
}

fn join(words: &[CyclicWord]) -> String {
    words.iter().map(CyclicWord::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_si(ctx: &Ctx, text: &str) -> Result<String, Failure> {
    let w = word(text)?;
    let si = self_intersection(&w, &ctx.order);
    let note = if ctx.surface == Surface::Torus && ctx.order == SurfaceOrder::TORUS { exact_square_si(&w) } else { None };
    let exactness = if si.is_exact() { "exact" } else { "bound" };
    Ok(match ctx.format {
        Format::Plain => {
            let mut out = if si.is_exact() { format!("{}\n", si.value) } else { format!("{si} (bound; nonprimitive)\n") };
            if let Some(v) = note {
                writeln!(out, "= {v} (exact for this square)").unwrap();
            }
            out
        }
        Format::Csv => format!("word,si,exactness,exact_note\n{w},{},{exactness},{}\n", si.value, note.map_or(String::new(), |v| v.to_string())),
        Format::Json => {
            format!("{}\n", json!({"word": w, "si": si.value, "exactness": exactness, "exact_note": note}))
        }
    })
}

fn cmd_in(ctx: &Ctx, a: &str, b: &str) -> Result<String, Failure> {
    let (v, w) = (word(a)?, word(b)?);
    let n = intersection_number(&v, &w, &ctx.order).map_err(usage)?;
    Ok(match ctx.format {
        Format::Plain => format!("{n}\n"),
        Format::Csv => format!("w1,w2,in\n{v},{w},{n}\n"),
        Format::Json => format!("{}\n", json!({"w1": v, "w2": w, "in": n})),
    })
}

fn cmd_surgery(ctx: &Ctx, text: &str, pair: Option<(usize, usize)>) -> Result<String, Failure> {
    let w = word(text)?;
    let pairs = match pair {
        Some((i, j)) => vec![surgery::opposite_pair(&w, i, j).map_err(usage)?],
        None => find_opposite_corner_pairs(&w),
    };
    let before = self_intersection(&w, &ctx.order);
    let mut rows = Vec::new();
    for p in &pairs {
        let (after, si_after) = match p.orientation {
            Orientation::Reversed => {
                let r = surgery_reversed(&w, p).map_err(usage)?;
                let si = self_intersection(&r, &ctx.order).exact_value();
                (vec![r], si)
            }
            Orientation::Same => {
                let mw = surgery_same(&w, p).map_err(usage)?;
                let si = multiword_si(&mw, &ctx.order).ok();
                (mw.components().to_vec(), si)
            }
        };
        rows.push((p, after, si_after));
    }
    let orient = |o: Orientation| if o == Orientation::Same { "same" } else { "reversed" };
    let si_text = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
    Ok(match ctx.format {
        Format::Plain => {
            let mut out = String::new();
            for (p, after, si) in &rows {
                writeln!(
                    out,
                    "{},{} {} {} si {} -> {}",
                    p.site1.position,
                    p.site2.position,
                    orient(p.orientation),
                    join(after),
                    before,
                    si_text(*si)
                )
                .unwrap();
            }
            out
        }
        Format::Csv => {
            let mut out = String::from("site1,site2,orientation,result,si_before,si_after\n");
            for (p, after, si) in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    p.site1.position,
                    p.site2.position,
                    orient(p.orientation),
                    join(after),
                    before.value,
                    si.map_or(String::new(), |v| v.to_string())
                )
                .unwrap();
            }
            out
        }
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|(p, after, si)| {
                    json!({
                        "site1": p.site1.position,
                        "site2": p.site2.position,
                        "orientation": p.orientation,
                        "result": after,
                        "si_before": before.value,
                        "si_after": si,
                    })
                })
                .collect();
            format!("{}\n", serde_json::Value::Array(items))
        }
    })
}

fn cmd_reduce(ctx: &Ctx, text: &str) -> Result<String, Failure> {
    let w = word(text)?;
    let trace = reduce_to_two_blockpairs(&w).map_err(usage)?;
    let fin = &trace.final_word;
    let bd = fin.block_decomposition();
    Ok(match ctx.format {
        Format::Json => format!("{}\n", serde_json::to_string(&trace).expect("trace serializes")),
        Format::Plain | Format::Csv => {
            let mut out = String::new();
            for s in &trace.steps {
                writeln!(out, "{}: {} -> {}", rule_name(s.rule), join(&s.before), join(&s.after)).unwrap();
            }
            writeln!(
                out,
                "final: {fin} (h={}, alpha={}, beta={}, gain >= {})",
                bd.h, bd.alpha, bd.beta, trace.guaranteed_gain
            )
            .unwrap();
            out
        }
    })
}

fn cmd_enumerate(ctx: &Ctx, length: usize, histogram: bool, all: bool) -> Result<String, Failure> {
    ctx.guard_length(length)?;
    if histogram {
        let h = census::si_histogram_with_order(length, &ctx.order, &ctx.label());
        return Ok(census::render_table(&[h], &ctx.label(), ctx.table_format()));
    }
    let words = torsi::enumerate_words(length, !all);
    Ok(match ctx.format {
        Format::Json => format!("{}\n", serde_json::to_string(&words).expect("words serialize")),
        Format::Csv => {
            let mut out = String::from("word\n");
            for w in &words {
                writeln!(out, "{w}").unwrap();
            }
            out
        }
        Format::Plain => words.iter().map(|w| format!("{w}\n")).collect(),
    })
}

fn cmd_table(ctx: &Ctx, max: usize) -> Result<String, Failure> {
    ctx.guard_length(max)?;
    let rows: Vec<_> = (1..=max).map(|l| census::si_histogram_with_order(l, &ctx.order, &ctx.label())).collect();
    Ok(census::render_table(&rows, &ctx.label(), ctx.table_format()))
}

fn cmd_extremal(ctx: &Ctx, length: usize, list: bool) -> Result<String, Failure> {
    let max = extremal::max_si(length, ctx.surface, ctx.force).map_err(usage)?;
    let mut fields = vec![("length", json!(length)), ("max_si", json!(max))];
    let mut words: Vec<(&str, Vec<CyclicWord>)> = Vec::new();
    match ctx.surface {
        Surface::Torus => {
            fields.push(("max_count", json!(extremal::count_maximal(length))));
            fields.push(("submax_count", json!(extremal::count_submaximal(length))));
            if list {
                words.push(("maximal", extremal::maximal_words(length)));
                words.push(("submaximal", extremal::submaximal_words(length)));
            }
        }
        Surface::Pants => {
            fields.push(("min_si", json!(extremal::pants_min_si(length))));
            if list {
                let ext = census::extremes_with_order(length, &ctx.order);
                words.push(("maximal", ext.max_words));
            }
        }
    }
    Ok(match ctx.format {
        Format::Json => {
            let mut obj: serde_json::Map<String, serde_json::Value> =
                fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            for (k, ws) in words {
                obj.insert(k.to_string(), json!(ws));
            }
            format!("{}\n", serde_json::Value::Object(obj))
        }
        Format::Csv => {
            let (keys, vals): (Vec<_>, Vec<_>) = fields.iter().map(|(k, v)| (*k, v.to_string())).unzip();
            let mut out = format!("{}\n{}\n", keys.join(","), vals.join(","));
            for (k, ws) in words {
                for w in ws {
                    writeln!(out, "{k},{w}").unwrap();
                }
            }
            out
        }
        Format::Plain => {
            let mut out = String::new();
            for (k, v) in fields {
                writeln!(out, "{k}: {v}").unwrap();
            }
            for (k, ws) in words {
                writeln!(out, "{k}: {}", join(&ws)).unwrap();
            }
            out
        }
    })
}

fn cmd_bound(ctx: &Ctx, text: &str) -> Result<String, Failure> {
    let w = word(text)?;
    let r = bound_report(&w).map_err(usage)?;
    Ok(match ctx.format {
        Format::Json => format!("{}\n", serde_json::to_string(&r).expect("report serializes")),
        Format::Csv => {
            let kind = serde_json::to_value(r.bound_kind).expect("kind serializes");
            format!(
                "word,si,bound,slack,bound_kind,pure_power_exception\n{},{},{},{},{},{}\n",
                r.word,
                r.si,
                r.bound,
                r.slack,
                kind.as_str().unwrap_or_default(),
                r.pure_power_exception
            )
        }
        Format::Plain => {
            let kind = serde_json::to_value(r.bound_kind).expect("kind serializes");
            let mut out = format!("si {} <= {} ({}), slack {}\n", r.si, r.bound, kind.as_str().unwrap_or_default(), r.slack);
            if r.pure_power_exception {
                out.push_str("pure power: SI = L - 1\n");
            }
            out
        }
    })
}

fn cmd_min_length(ctx: &Ctx, k: u64) -> Result<String, Failure> {
    let l = extremal::min_length_for_si(k);
    Ok(match ctx.format {
        Format::Plain => format!("{l}\n"),
        Format::Csv => format!("k,length\n{k},{l}\n"),
        Format::Json => format!("{}\n", json!({"k": k, "length": l})),
    })
}

fn cmd_verify(ctx: &Ctx, suite: Suite) -> Result<String, Failure> {
    let report = suite.run();
    let text = match ctx.format {
        Format::Json => format!("{}\n", serde_json::to_string(&report).expect("report serializes")),
        Format::Csv => format!(
            "suite,checks,failures\n{},{},{}\n",
            report.suite,
            report.checks,
            report.failures.len()
        ),
        Format::Plain => format!("{report}\n"),
    };
    if report.passed() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure {
            code: EXIT_FAILED,
            message: format!("{} failed: {}", report.suite, report.failures[0]),
        })
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let cfg = cli.config;
    if let Some(n) = cfg.threads.filter(|&n| n > 0) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(usage)?;
    }
    let surface = match cfg.surface {
        SurfaceArg::Torus => Surface::Torus,
        SurfaceArg::Pants => Surface::Pants,
    };
    let order = match &cfg.ring {
        Some(text) => parse_ring(text)?,
        None => surface.order(),
    };
    if surface == Surface::Pants {
        census::pants_self_test(&order).map_err(|e| Failure { code: EXIT_FAILED, message: e.to_string() })?;
    }
    let ctx = Ctx { surface, order, format: cfg.format, force: cfg.force_unvalidated };
    match cli.command {
        Command::Si { word } => cmd_si(&ctx, &word),
        Command::In { w1, w2 } => cmd_in(&ctx, &w1, &w2),
        Command::Surgery { word, pair } => cmd_surgery(&ctx, &word, pair),
        Command::Reduce { word } => cmd_reduce(&ctx, &word),
        Command::Enumerate { length, histogram, all } => cmd_enumerate(&ctx, length, histogram, all),
        Command::Table { max } => cmd_table(&ctx, max),
        Command::Extremal { length, words } => cmd_extremal(&ctx, length, words),
        Command::Bound { word } => cmd_bound(&ctx, &word),
        Command::MinLength { k } => cmd_min_length(&ctx, k),
        Command::Verify { suite } => cmd_verify(&ctx, suite),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
