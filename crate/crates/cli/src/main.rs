// SPDX-License-Identifier: Apache-2.0

//! `mcsort`: generate, simulate, verify and measure metastability-containing
//! sorting circuits.
//!
//! Exit status: 0 on success, 1 on usage or input errors, 2 when a
//! verification finds a mismatch.

mod io;
mod stats;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mcsort::fsm::{format_trace_as, fsm_trace, TraceLayout};
use mcsort::gray::enumerate_valid;
use mcsort::ir::{expand, gates_to_dot, ops_to_dot, BlockLibrary, GateNetlist, NetlistJson, OpGraph};
use mcsort::ppc::predict::{format_q, predict, PredictArgs};
use mcsort::ppc::{
    build_general, build_serial, build_tree, insert_buffers, Fanout, PpcConfig, Quantity, Split,
};
use mcsort::sorter::verify::{
    verify_2sort_exhaustive, verify_2sort_sampled, verify_nsorter_exhaustive, verify_nsorter_sampled,
};
use mcsort::sorter::{build_2sort, build_nsorter, Candidate, PpcKind, Reference, Report, SortingNetwork};
use mcsort::{Trit, TritVec};
use serde::Deserialize;

/// Widths swept exhaustively by default; up to the library cap with `--full`.
const DEFAULT_EXHAUSTIVE: usize = 10;
const DEFAULT_SAMPLES: u64 = 10_000;
/// Largest tuple space `verify --n` enumerates before falling back to samples.
const NSORT_EXHAUSTIVE_LIMIT: u128 = 1 << 24;

#[derive(Parser)]
#[command(
    name = "mcsort",
    version,
    about = "Metastability-containing Gray code sorting circuits"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a prefix circuit over the transition operator.
    GenPpc(GenPpc),
    /// Generate a 2-sort circuit.
    #[command(name = "gen-2sort")]
    Gen2sort(Gen2sort),
    /// Generate an n-input sorter from a comparator network.
    GenNsort(GenNsort),
    /// Evaluate a JSON netlist on trit literals.
    Simulate(Simulate),
    /// Print the state trace of the comparison machine on two strings.
    Trace(TraceCmd),
    /// Check a circuit against the brute-force oracle.
    Verify(Verify),
    /// CSV of sizes, depths and bounds over a range of widths.
    Stats(Stats),
    /// Evaluate a closed-form predictor.
    Predict(PredictCmd),
    /// Convert a netlist, or dump the valid strings of a width.
    Export(Export),
}

#[derive(Args, Clone)]
struct PpcArgs {
    /// Prefix circuit family.
    #[arg(long, value_enum, default_value_t = Family::General)]
    ppc: Family,
    /// Outer steps of the general construction.
    #[arg(long, default_value_t = 0)]
    k: usize,
    /// `unbounded` or an operator fan-out bound of at least 3.
    #[arg(long, default_value = "unbounded", value_parser = parse_fanout)]
    fanout: Fanout,
    /// How right nodes split their inputs.
    #[arg(long, default_value = "unbalanced", value_parser = parse_split)]
    split: Split,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    General,
    Serial,
    Tree,
}

impl PpcArgs {
    fn kind(&self) -> PpcKind {
        match self.ppc {
            Family::Serial => PpcKind::Serial,
            Family::Tree => PpcKind::Tree,
            Family::General => PpcKind::General {
                k: self.k,
                split: self.split,
                fanout: self.fanout,
            },
        }
    }
}

fn parse_fanout(s: &str) -> Result<Fanout, String> {
    match s {
        "unbounded" | "none" => Ok(Fanout::Unbounded),
        _ => s
            .parse()
            .map(Fanout::Bounded)
            .map_err(|_| format!("expected `unbounded` or a number, got {s:?}")),
    }
}

fn parse_split(s: &str) -> Result<Split, String> {
    s.parse().map_err(|e: mcsort::Error| e.to_string())
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Layer {
    /// Operator graph over pairs.
    Op,
    /// Gate netlist.
    Gate,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Expand blocks with one inverter per use instead of per block.
    #[arg(long)]
    no_share: bool,
}

impl Output {
    fn lib(&self) -> BlockLibrary {
        BlockLibrary::standard(!self.no_share)
    }

    fn ops(&self, g: &OpGraph) -> Result<()> {
        let text = match self.format {
            Format::Json => g.to_json().to_string_pretty()? + "\n",
            Format::Dot => ops_to_dot(g),
        };
        io::emit(self.out.as_deref(), &text)
    }

    fn gates(&self, n: &GateNetlist) -> Result<()> {
        let text = match self.format {
            Format::Json => n.to_json().to_string_pretty()? + "\n",
            Format::Dot => gates_to_dot(n),
        };
        io::emit(self.out.as_deref(), &text)
    }
}

#[derive(Args)]
struct GenPpc {
    /// Number of inputs.
    #[arg(long = "B", conflicts_with = "b", required_unless_present = "b")]
    width: Option<usize>,
    /// Tree of 2^b inputs.
    #[arg(long = "b")]
    b: Option<usize>,
    #[command(flatten)]
    ppc: PpcArgs,
    /// Insert buffers so that fan-out is two except on last outputs.
    #[arg(long)]
    buffers: bool,
    #[arg(long, value_enum, default_value_t = Layer::Op)]
    layer: Layer,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Gen2sort {
    #[arg(long = "B")]
    width: usize,
    #[command(flatten)]
    ppc: PpcArgs,
    #[arg(long, value_enum, default_value_t = Layer::Gate)]
    layer: Layer,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct NetworkArgs {
    /// Channels; a Batcher network is used unless --network is given.
    #[arg(long)]
    n: Option<usize>,
    /// JSON comparator network: {"n": .., "layers": [[[i, j], ..], ..]}.
    #[arg(long)]
    network: Option<PathBuf>,
}

#[derive(Deserialize)]
struct NetworkFile {
    #[serde(default)]
    name: Option<String>,
    n: usize,
    layers: Vec<Vec<(usize, usize)>>,
}

impl NetworkArgs {
    fn network(&self) -> Result<Option<SortingNetwork>> {
        match (&self.network, self.n) {
            (Some(path), n) => {
                let text = io::read(path)?;
                let f: NetworkFile = serde_json::from_str(&text)
                    .with_context(|| format!("malformed network file {:?}", path.display().to_string()))?;
                if n.is_some_and(|n| n != f.n) {
                    bail!("--n {} disagrees with the network file (n = {})", n.unwrap(), f.n);
                }
                let name = f.name.unwrap_or_else(|| path.display().to_string());
                Ok(Some(SortingNetwork::explicit(&name, f.n, f.layers)?))
            }
            (None, Some(n)) => Ok(Some(SortingNetwork::batcher(n)?)),
            (None, None) => Ok(None),
        }
    }
}

#[derive(Args)]
struct GenNsort {
    #[command(flatten)]
    net: NetworkArgs,
    #[arg(long = "B")]
    width: usize,
    #[command(flatten)]
    ppc: PpcArgs,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct Simulate {
    /// Netlist JSON from one of the gen commands.
    netlist: PathBuf,
    /// Input trits in port order; several literals are concatenated.
    /// Operator graphs take two trits per input.
    #[arg(required = true)]
    inputs: Vec<String>,
}

#[derive(Args)]
struct TraceCmd {
    g: String,
    h: String,
    /// One merged output row, no final state column.
    #[arg(long)]
    joint: bool,
}

#[derive(Args)]
struct Verify {
    #[arg(long = "B")]
    width: usize,
    #[command(flatten)]
    net: NetworkArgs,
    #[command(flatten)]
    ppc: PpcArgs,
    /// Random cases instead of an exhaustive sweep.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Allow exhaustive 2-sort sweeps beyond B = 10.
    #[arg(long)]
    full: bool,
    /// Also check the sequential reference machine (2-sort only).
    #[arg(long)]
    reference: bool,
    /// Check this gate-netlist JSON as a 2-sort instead of generating one.
    #[arg(long, conflicts_with_all = ["n", "network"])]
    netlist: Option<PathBuf>,
    #[arg(long)]
    no_share: bool,
}

#[derive(Args)]
struct Stats {
    /// Inclusive width range, e.g. 1..70.
    #[arg(long = "B", default_value = "1..70")]
    widths: String,
    /// Comma-separated: unbalanced, balanced, kogge-stone, f<N>.
    #[arg(long, default_value = "unbalanced,balanced", value_delimiter = ',')]
    variants: Vec<String>,
    /// Comma-separated outer step counts; rows with k > ceil(log2 B) are skipped.
    #[arg(long, default_value = "0", value_delimiter = ',')]
    k: Vec<usize>,
    /// Write the CSV here instead of stdout.
    #[arg(long, alias = "out")]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct PredictCmd {
    /// tree_size, tree_depth, cor2_bound, thm5_bound, buffer_count,
    /// fanout_size_bound or kogge_stone_size.
    quantity: String,
    #[arg(long = "b")]
    b: Option<usize>,
    #[arg(long = "B")]
    width: Option<usize>,
    #[arg(long, default_value_t = 0)]
    k: usize,
    #[arg(long)]
    f: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Json,
    Dot,
    Csv,
}

#[derive(Args)]
struct Export {
    #[arg(long, value_enum)]
    format: ExportFormat,
    /// Netlist JSON to convert.
    #[arg(long, conflicts_with = "valid", required_unless_present = "valid")]
    netlist: Option<PathBuf>,
    /// Dump every valid string of this width (csv only).
    #[arg(long)]
    valid: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Outcome of a command that ran to completion.
enum Status {
    Ok,
    Mismatch,
}

fn gen_ppc(a: &GenPpc) -> Result<Status> {
    let width = match (a.width, a.b) {
        (Some(w), _) => w,
        (None, Some(b)) if b < usize::BITS as usize => 1usize << b,
        _ => bail!("--b too large"),
    };
    let mut p = match a.ppc.ppc {
        Family::Serial => {
            if a.buffers {
                bail!("--buffers needs a tree or general circuit");
            }
            let g = build_serial(width)?;
            return emit_ppc(a, &g);
        }
        Family::Tree => {
            if !width.is_power_of_two() {
                bail!("--ppc tree needs a power-of-two width, got {width}");
            }
            build_tree(width.trailing_zeros() as usize)?
        }
        Family::General => {
            let cfg = PpcConfig {
                width,
                k: a.ppc.k,
                fanout: a.ppc.fanout,
                split: a.ppc.split,
            };
            build_general(&cfg)?
        }
    };
    if a.buffers && !p.buffered {
        p = insert_buffers(&p)?;
    }
    emit_ppc(a, &p.graph)
}

fn emit_ppc(a: &GenPpc, g: &OpGraph) -> Result<Status> {
    match a.layer {
        Layer::Op => a.output.ops(g)?,
        Layer::Gate => a.output.gates(&expand(g, &a.output.lib())?)?,
    }
    Ok(Status::Ok)
}

fn gen_2sort(a: &Gen2sort) -> Result<Status> {
    let s = build_2sort(a.width, &a.ppc.kind(), &a.output.lib())?;
    match a.layer {
        Layer::Op => a.output.ops(&s.ops)?,
        Layer::Gate => a.output.gates(&s.gates)?,
    }
    Ok(Status::Ok)
}

fn gen_nsort(a: &GenNsort) -> Result<Status> {
    let net = a
        .net
        .network()?
        .ok_or_else(|| anyhow!("gen-nsort needs --n or --network"))?;
    let s = build_nsorter(&net, a.width, &a.ppc.kind(), &a.output.lib())?;
    a.output.gates(&s.gates)?;
    Ok(Status::Ok)
}

fn simulate(a: &Simulate) -> Result<Status> {
    let j = NetlistJson::parse(&io::read(&a.netlist)?)
        .with_context(|| format!("malformed netlist {:?}", a.netlist.display().to_string()))?;
    let mut trits = Vec::new();
    for tok in &a.inputs {
        trits.extend(io::parse_trits(tok)?);
    }
    let line = if j.is_operator_layer() {
        let g = OpGraph::from_json(&j)?;
        if trits.len() != 2 * g.width_in() {
            bail!(
                "netlist takes {} pairs ({} trits), got {} trits",
                g.width_in(),
                2 * g.width_in(),
                trits.len()
            );
        }
        let pairs: Vec<_> = trits.chunks(2).map(|c| mcsort::Pair(c[0], c[1])).collect();
        let out = g.eval_pairs(&pairs)?;
        out.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
    } else {
        let n = GateNetlist::from_json(&j)?;
        if trits.len() != n.width_in() {
            bail!("netlist takes {} trits, got {}", n.width_in(), trits.len());
        }
        io::render(&n.eval(&trits)?)
    };
    io::emit(None, &(line + "\n"))?;
    Ok(Status::Ok)
}

fn trace(a: &TraceCmd) -> Result<Status> {
    let (g, h) = (io::parse_vec(&a.g)?, io::parse_vec(&a.h)?);
    let layout = if a.joint {
        TraceLayout::Joint
    } else {
        TraceLayout::Split
    };
    let t = fsm_trace(&g, &h)?;
    io::emit(None, &format_trace_as(&t, layout))?;
    Ok(Status::Ok)
}

fn report(reports: &[Report]) -> Result<Status> {
    let mut text = String::new();
    for r in reports {
        writeln!(text, "{r}")?;
        for c in &r.counterexamples {
            writeln!(
                text,
                "  inputs {} -> got {}, want {}",
                c.inputs.join(" "),
                c.got.join(" "),
                c.want.join(" ")
            )?;
        }
    }
    io::emit(None, &text)?;
    Ok(if reports.iter().all(Report::passed) {
        Status::Ok
    } else {
        Status::Mismatch
    })
}

/// A 2-sort read from disk: ports `2i-1 = g_i`, `2i = h_i`, outputs
/// `(max_i, min_i)` likewise.
struct NetlistCandidate {
    name: String,
    width: usize,
    gates: GateNetlist,
}

impl NetlistCandidate {
    fn load(path: &std::path::Path, width: usize) -> Result<Self> {
        let j = NetlistJson::parse(&io::read(path)?)
            .with_context(|| format!("malformed netlist {:?}", path.display().to_string()))?;
        if j.is_operator_layer() {
            bail!("--netlist expects a gate netlist, got an operator graph");
        }
        let gates = GateNetlist::from_json(&j)?;
        if gates.width_in() != 2 * width || gates.width_out() != 2 * width {
            bail!(
                "netlist has {} inputs and {} outputs, a 2-sort of width {width} needs {}",
                gates.width_in(),
                gates.width_out(),
                2 * width
            );
        }
        Ok(NetlistCandidate {
            name: path.display().to_string(),
            width,
            gates,
        })
    }
}

impl Candidate for NetlistCandidate {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn eval_batch(&self, cases: &[Vec<TritVec>]) -> mcsort::Result<Vec<Vec<TritVec>>> {
        cases
            .iter()
            .map(|c| {
                let ins: Vec<Trit> = (1..=self.width)
                    .flat_map(|i| [c[0].get(i), c[1].get(i)])
                    .collect();
                let out = self.gates.eval(&ins)?;
                let hi: Vec<Trit> = out.iter().step_by(2).copied().collect();
                let lo: Vec<Trit> = out.iter().skip(1).step_by(2).copied().collect();
                Ok(vec![TritVec::from_trits(&hi)?, TritVec::from_trits(&lo)?])
            })
            .collect()
    }
}

fn verify(a: &Verify) -> Result<Status> {
    let lib = BlockLibrary::standard(!a.no_share);
    let kind = a.ppc.kind();
    if let Some(net) = a.net.network()? {
        if a.reference {
            bail!("--reference applies to 2-sorts only");
        }
        let s = build_nsorter(&net, a.width, &kind, &lib)?;
        let space = mcsort::gray::valid_count(a.width).checked_pow(net.n as u32);
        let r = match a.samples {
            None if space.is_some_and(|t| t <= NSORT_EXHAUSTIVE_LIMIT) => verify_nsorter_exhaustive(&s)?,
            n => verify_nsorter_sampled(&s, n.unwrap_or(DEFAULT_SAMPLES), a.seed)?,
        };
        return report(&[r]);
    }
    let loaded;
    let built;
    let main: &dyn Candidate = match &a.netlist {
        Some(path) => {
            loaded = NetlistCandidate::load(path, a.width)?;
            &loaded
        }
        None => {
            built = build_2sort(a.width, &kind, &lib)?;
            &built
        }
    };
    let mut cands: Vec<&dyn Candidate> = vec![main];
    if a.reference {
        cands.push(&Reference);
    }
    let cap = if a.full {
        mcsort::sorter::verify::MAX_EXHAUSTIVE
    } else {
        DEFAULT_EXHAUSTIVE
    };
    let reports = match a.samples {
        None if a.width <= cap => verify_2sort_exhaustive(a.width, &cands)?,
        n => verify_2sort_sampled(a.width, &cands, n.unwrap_or(DEFAULT_SAMPLES), a.seed)?,
    };
    report(&reports)
}

fn run_stats(a: &Stats) -> Result<Status> {
    let widths = stats::parse_range(&a.widths)?;
    let variants = a
        .variants
        .iter()
        .map(|v| v.parse())
        .collect::<Result<Vec<stats::Variant>>>()?;
    io::emit(a.csv.as_deref(), &stats::csv(widths, &variants, &a.k)?)?;
    Ok(Status::Ok)
}

fn run_predict(a: &PredictCmd) -> Result<Status> {
    let q: Quantity = a.quantity.parse()?;
    let v = predict(
        q,
        PredictArgs {
            b: a.b,
            width: a.width,
            k: a.k,
            f: a.f,
        },
    )?;
    io::emit(None, &(format_q(&v) + "\n"))?;
    Ok(Status::Ok)
}

fn netlist_csv(j: &NetlistJson) -> String {
    let mut out = String::from("id,kind,fanin,port,role\n");
    for n in &j.nodes {
        let fanin: Vec<String> = n.fanin.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            n.id,
            n.kind,
            fanin.join(" "),
            n.port.map(|p| p.to_string()).unwrap_or_default(),
            n.meta.role.as_deref().unwrap_or("")
        );
    }
    out
}

fn export(a: &Export) -> Result<Status> {
    let out = a.out.as_deref();
    if let Some(w) = a.valid {
        if a.format != ExportFormat::Csv {
            bail!("--valid is exported as csv only");
        }
        let mut text = String::from("rank,string\n");
        for (r, s) in enumerate_valid(w)?.iter().enumerate() {
            writeln!(text, "{r},{s}")?;
        }
        io::emit(out, &text)?;
        return Ok(Status::Ok);
    }
    let path = a.netlist.as_deref().expect("clap requires --netlist or --valid");
    let j = NetlistJson::parse(&io::read(path)?)
        .with_context(|| format!("malformed netlist {:?}", path.display().to_string()))?;
    let text = match a.format {
        ExportFormat::Json => j.to_string_pretty()? + "\n",
        ExportFormat::Csv => netlist_csv(&j),
        ExportFormat::Dot if j.is_operator_layer() => ops_to_dot(&OpGraph::from_json(&j)?),
        ExportFormat::Dot => gates_to_dot(&GateNetlist::from_json(&j)?),
    };
    io::emit(out, &text)?;
    Ok(Status::Ok)
}

fn run(cmd: &Cmd) -> Result<Status> {
    match cmd {
        Cmd::GenPpc(a) => gen_ppc(a),
        Cmd::Gen2sort(a) => gen_2sort(a),
        Cmd::GenNsort(a) => gen_nsort(a),
        Cmd::Simulate(a) => simulate(a),
        Cmd::Trace(a) => trace(a),
        Cmd::Verify(a) => verify(a),
        Cmd::Stats(a) => run_stats(a),
        Cmd::Predict(a) => run_predict(a),
        Cmd::Export(a) => export(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli.cmd) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Mismatch) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
