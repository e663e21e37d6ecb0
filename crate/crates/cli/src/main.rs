//! Command-line surface: decide rectilinear planarity, realize drawings,
//! consult the brute-force oracle, dump spirality tables, generate
//! instances, and benchmark.

use clap::{Args, Parser, Subcommand, ValueEnum};
use orthotest_core::compact::compact;
use orthotest_core::fastpath;
use orthotest_core::generate::{gen_lower_bound, gen_random, LowerBoundParams, RandomKind};
use orthotest_core::graph::{parse_graph, Graph};
use orthotest_core::oracle::{oracle_test, OracleLimits};
use orthotest_core::realize::{to_json, to_svg};
use orthotest_core::spirality::SumEngine;
use orthotest_core::spq::{build_spq_star, rooted_view};
use orthotest_core::tester::{DpTable, TestOptions};
use orthotest_core::{decide, realize, FastPath};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "orthotest", version, about = "Rectilinear planarity for degree-4 partial 2-trees")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    flags: GlobalFlags,
}

#[derive(Args, Clone)]
struct GlobalFlags {
    /// Use the linear-time tester for independent-parallel SP blocks.
    #[arg(long = "fast-path", global = true, value_enum, default_value = "auto")]
    fast_path: FastPathArg,
    /// Cartesian sums by FFT boolean convolution for large sets.
    #[arg(long = "fft", global = true, value_enum, default_value = "off")]
    fft: Toggle,
    /// Print the root witness as JSON after a positive test.
    #[arg(long = "emit-witness", global = true)]
    emit_witness: bool,
    /// Compute block labels on demand instead of eagerly.
    #[arg(long = "lazy-labels", global = true)]
    lazy_labels: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FastPathArg {
    Auto,
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide rectilinear planarity: prints YES/NO, exit 0/1 (2 on error).
    Test { file: String },
    /// Realize a drawing and write it as .svg or .json.
    Realize {
        file: String,
        #[arg(short = 'o', long = "out")]
        out: String,
    },
    /// Brute-force verdict for desk-scale graphs.
    Oracle { file: String },
    /// Dump the spirality-set tables for one root.
    Spirality {
        file: String,
        /// Edge identifying the reference chain, as "u,v".
        #[arg(long = "root")]
        root: String,
    },
    /// Instance generators.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Timing suites; emits CSV on stdout.
    Bench {
        #[arg(long = "suite", value_enum)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum GenCmd {
    /// The recursive family whose drawings need logarithmic spirality.
    LowerBound {
        #[arg(long = "N")]
        n: u32,
    },
    /// Seeded random graphs of a given kind.
    Random {
        #[arg(long = "kind", value_enum)]
        kind: KindArg,
        #[arg(long = "n")]
        n: usize,
        #[arg(long = "seed")]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Sp,
    Partial2tree,
    IndependentParallel,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    General,
    Ip,
}

fn options(flags: &GlobalFlags) -> TestOptions {
    TestOptions {
        engine: match flags.fft {
            Toggle::On => SumEngine::Fft,
            Toggle::Off => SumEngine::ShiftOr,
        },
        ..TestOptions::default()
    }
}

fn fast_path(flags: &GlobalFlags) -> FastPath {
    match flags.fast_path {
        FastPathArg::Auto => FastPath::Auto,
        FastPathArg::On => FastPath::On,
        FastPathArg::Off => FastPath::Off,
    }
}

fn load(file: &str) -> Result<Graph, String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{file}: {e}"))?;
    parse_graph(&text).map_err(|e| format!("{file}: {e}"))
}

fn emit_witness(g: &Graph, flags: &GlobalFlags) {
    // Re-run the relevant tester to recover the root pair.
    let opts = options(flags);
    let class = orthotest_core::graph::validate_partial2tree(g);
    if class == orthotest_core::graph::GraphClass::SpBlock {
        if let Ok(tree) = build_spq_star(g) {
            let use_fast = orthotest_core::spq::is_independent_parallel(&tree)
                && !matches!(flags.fast_path, FastPathArg::Off);
            if use_fast {
                if let Ok(Some(w)) = fastpath::test_ip(g) {
                    let chain = &tree.chain(w.root).vertices;
                    println!(
                        "{{\"root_chain\":{:?},\"root_sigma\":{},\"child_sigma\":{}}}",
                        chain,
                        w.root_sigma.as_f64(),
                        w.child_sigma.as_f64()
                    );
                    return;
                }
            }
            if let Ok(Some(w)) = orthotest_core::tester::test_block(
                g,
                orthotest_core::tester::RootConstraint::None,
                opts,
            ) {
                let chain = &tree.chain(w.root).vertices;
                println!(
                    "{{\"root_chain\":{:?},\"root_sigma\":{},\"child_sigma\":{}}}",
                    chain,
                    w.root_sigma.as_f64(),
                    w.child_sigma.as_f64()
                );
            }
        }
    }
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Test { file } => {
            let g = load(&file)?;
            let yes = decide(&g, options(&cli.flags), fast_path(&cli.flags))
                .map_err(|e| e.to_string())?;
            if yes {
                println!("YES");
                if cli.flags.emit_witness {
                    emit_witness(&g, &cli.flags);
                }
                Ok(ExitCode::SUCCESS)
            } else {
                println!("NO");
                Ok(ExitCode::from(1))
            }
        }
        Cmd::Realize { file, out } => {
            let g = load(&file)?;
            let rep = realize(&g, options(&cli.flags), fast_path(&cli.flags))
                .map_err(|e| e.to_string())?;
            let mut rep = match rep {
                Some(r) => r,
                None => {
                    println!("NO");
                    return Ok(ExitCode::from(1));
                }
            };
            rep.coords = Some(compact(&rep));
            let report = rep.validate();
            if !report.ok() {
                return Err(format!("internal error: realized drawing invalid: {:?}", report.violations));
            }
            eprintln!("validator: pass ({} faces, {} vertices)", rep.faces.len(), rep.n);
            let payload = if out.ends_with(".svg") {
                to_svg(&rep).map_err(|e| e.to_string())?
            } else if out.ends_with(".json") {
                to_json(&rep)
            } else {
                return Err("output must end in .svg or .json".into());
            };
            std::fs::write(&out, payload).map_err(|e| format!("{out}: {e}"))?;
            println!("YES");
            if cli.flags.emit_witness {
                emit_witness(&g, &cli.flags);
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Oracle { file } => {
            let g = load(&file)?;
            let lim = OracleLimits::from_env();
            let yes = oracle_test(&g, &lim, &[]).map_err(|e| e.to_string())?;
            println!("{}", if yes { "YES" } else { "NO" });
            Ok(if yes { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Spirality { file, root } => {
            let g = load(&file)?;
            let (u, v) = parse_edge_arg(&root)?;
            let tree = build_spq_star(&g).map_err(|e| e.to_string())?;
            let q = tree
                .q_star_with_edge(&g, u, v)
                .ok_or_else(|| format!("no chain contains edge {u},{v}"))?;
            let view = rooted_view(&tree, &g, q).map_err(|e| e.to_string())?;
            let mut table = DpTable::new(&g, tree.clone(), options(&cli.flags));
            let mut rows = Vec::new();
            for &node in &view.post_order {
                let set = table.node_set(&view, node);
                let vals: Vec<String> = set
                    .iter()
                    .map(|s| format!("{}", s.as_f64()))
                    .collect();
                rows.push(format!("{{\"node\":{node},\"set\":[{}]}}", vals.join(",")));
            }
            println!(
                "{{\"root\":{q},\"tree\":{},\"sets\":[{}]}}",
                tree.to_debug_json(),
                rows.join(",")
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Gen(gen) => {
            let g = match gen {
                GenCmd::LowerBound { n } => {
                    let p = LowerBoundParams::new(n).map_err(|e| e.to_string())?;
                    gen_lower_bound(p).map_err(|e| e.to_string())?
                }
                GenCmd::Random { kind, n, seed } => {
                    let kind = match kind {
                        KindArg::Sp => RandomKind::Sp,
                        KindArg::Partial2tree => RandomKind::Partial2Tree,
                        KindArg::IndependentParallel => RandomKind::IndependentParallel,
                    };
                    gen_random(kind, n, seed).map_err(|e| e.to_string())?
                }
            };
            println!("{}", g.to_json());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Bench { suite } => {
            run_bench(suite, &cli.flags);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn parse_edge_arg(s: &str) -> Result<(u32, u32), String> {
    let mut it = s.split(',');
    let u = it
        .next()
        .and_then(|t| t.trim().parse().ok())
        .ok_or("expected --root u,v")?;
    let v = it
        .next()
        .and_then(|t| t.trim().parse().ok())
        .ok_or("expected --root u,v")?;
    Ok((u, v))
}

fn run_bench(suite: Suite, flags: &GlobalFlags) {
    println!("n,edges,kind,verdict,micros");
    let opts = options(flags);
    match suite {
        Suite::General => {
            for &n in &[100usize, 200, 400, 800, 1600] {
                for seed in 0..3u64 {
                    let g = gen_random(RandomKind::Sp, n, seed).expect("generator");
                    let t0 = Instant::now();
                    let yes = decide(&g, opts, FastPath::Off).expect("partial 2-tree");
                    let us = t0.elapsed().as_micros();
                    println!(
                        "{},{},sp,{},{}",
                        g.vertex_count(),
                        g.edge_count(),
                        if yes { "YES" } else { "NO" },
                        us
                    );
                }
            }
        }
        Suite::Ip => {
            for &n in &[10_000usize, 25_000, 50_000, 100_000] {
                for seed in 0..3u64 {
                    let g =
                        gen_random(RandomKind::IndependentParallel, n, seed).expect("generator");
                    let t0 = Instant::now();
                    let yes = decide(&g, opts, FastPath::On).expect("independent-parallel");
                    let us = t0.elapsed().as_micros();
                    println!(
                        "{},{},independent_parallel,{},{}",
                        g.vertex_count(),
                        g.edge_count(),
                        if yes { "YES" } else { "NO" },
                        us
                    );
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
