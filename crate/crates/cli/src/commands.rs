use std::fmt::Write as _;

use clap::Args;
use serde_json::{json, Value};

use qaut_core::cstar::{is_delta_form, mu_mu_star, AlgState, DeltaForm, FinDimAlgebra, StateSpec};
use qaut_core::dims::DimVector;
use qaut_core::exec::Execution;
use qaut_core::ktheory::{boundary_matrix, closed_form, k_theory, Verification};
use qaut_core::linalg::{smith_normal_form, IntMatrix};
use qaut_core::magic::{generator_rank_capped, DEFAULT_MAX_N};
use qaut_core::resolution::{check_exactness, TestObject, DEFAULT_DEGREE_BOUND};
use qaut_core::sweep::{run_sweep, SweepConfig};
use qaut_core::torsion::{
    block_decomposition, cocycle_lattice_generators, extract_torsion_data, is_ergodic, sample_cocycle,
    twisted_group_algebra, Cocycle, FiniteGroup, GradedAlgebra, TorsionError,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::input::{parse_json, read_source};
use crate::{Command, Outcome};

#[derive(Args, Debug)]
pub struct DimsArgs {
    /// Block sizes k₁,…,kₙ, comma-separated.
    #[arg(long)]
    pub dims: DimVector,
}

#[derive(Args, Debug)]
pub struct ResolutionArgs {
    #[arg(long)]
    pub dims: DimVector,
    /// Truncation bound on polynomial degree.
    #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND)]
    pub degree: usize,
    /// Test object `C` or `A`; both when omitted.
    #[arg(long)]
    pub test: Option<TestObject>,
}

#[derive(Args, Debug)]
pub struct SnfArgs {
    /// Matrix file in the text format, `-` for standard input.
    #[arg(long)]
    pub matrix: String,
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    /// JSON file `{"blocks": [...], "density": [...]}`, `-` for standard input.
    #[arg(long, conflicts_with_all = ["dims", "weights"])]
    pub state: Option<String>,
    #[arg(long)]
    pub dims: Option<DimVector>,
    /// Block weights ω(1_b) as rationals, e.g. `1/3,2/3`.
    #[arg(long, requires = "dims")]
    pub weights: Option<String>,
    /// State used with `--dims` when no weights are given.
    #[arg(long, value_parser = ["trace", "plancherel"], default_value = "trace")]
    pub preset: String,
}

#[derive(Args, Debug)]
pub struct TwistedArgs {
    /// Named group: Z<n>, D<n>, S<n>, Q8, V4, or products like Z2xZ4.
    #[arg(long, conflicts_with = "group_file")]
    pub group: Option<String>,
    /// JSON Cayley table `{"table": [[...]]}`.
    #[arg(long)]
    pub group_file: Option<String>,
    /// JSON cocycle `{"group": ..., "root_order": m, "table": [[...]]}`.
    #[arg(long, conflicts_with_all = ["pauli", "random", "group", "group_file"])]
    pub cocycle: Option<String>,
    /// The Pauli cocycle on Z2xZ2.
    #[arg(long, conflicts_with_all = ["random", "group", "group_file"])]
    pub pauli: bool,
    /// Random cocycle with values in μ_|G|.
    #[arg(long)]
    pub random: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Include the algebra's structure constants in the results.
    #[arg(long)]
    pub emit_algebra: bool,
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    /// Graded algebra JSON (structure constants or matrices), `-` for standard input.
    #[arg(long)]
    pub algebra: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct MagicArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    pub max_n: usize,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
    #[arg(long, default_value_t = 6)]
    pub max_k: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND)]
    pub degree: usize,
    /// Skip the resolution exactness check.
    #[arg(long)]
    pub no_resolution: bool,
    #[arg(long)]
    pub sequential: bool,
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn ok(inputs: Value, results: Value, table: String) -> Outcome {
    Outcome {
        inputs,
        results,
        warnings: Vec::new(),
        verified: true,
        table,
    }
}

pub fn run(cmd: &Command) -> Result<Outcome, String> {
    match cmd {
        Command::Ktheory(a) => Ok(ktheory(&a.dims)),
        Command::ClosedForm(a) => Ok(closed(&a.dims)),
        Command::Verify(a) => Ok(verify(&a.dims)),
        Command::Boundary(a) => Ok(boundary(&a.dims)),
        Command::ResolutionCheck(a) => resolution(a),
        Command::Snf(a) => snf(a),
        Command::DeltaForm(a) => delta(a),
        Command::TwistedGroup(a) => twisted(a),
        Command::ExtractTorsion(a) => extract(a),
        Command::MagicRank(a) => magic(a),
        Command::Sweep(a) => Ok(sweep(a)),
    }
}

fn dims_input(k: &DimVector) -> Value {
    json!({ "dims": k })
}

fn ktheory(k: &DimVector) -> Outcome {
    let r = k_theory(k);
    let gen: Vec<String> = r.kernel_generator.iter().map(ToString::to_string).collect();
    let table = format!("dims  {k}\nK0    {}\nK1    {}\nker   ({})\n", r.k0, r.k1, gen.join(","));
    let mut o = ok(dims_input(k), to_value(&r), table);
    o.warnings.extend(k.scope_warning());
    o
}

fn closed(k: &DimVector) -> Outcome {
    let (k0, k1) = closed_form(k);
    let table = format!("dims  {k}\nK0    {k0}\nK1    {k1}\n");
    let mut o = ok(dims_input(k), json!({ "K0": k0, "K1": k1 }), table);
    o.warnings.extend(k.scope_warning());
    o
}

fn verify(k: &DimVector) -> Outcome {
    let v = Verification::run(k);
    let matched = v.matches() && v.kernel_matches();
    let summary = format!(
        "{}: {} / {}",
        if matched { "match" } else { "MISMATCH" },
        v.computed.k0,
        v.computed.k1
    );
    let mut table = format!("dims      {k}\ncomputed  {} / {}\nexpected  {} / {}\nkernel    {}\n",
        v.computed.k0, v.computed.k1, v.expected_k0, v.expected_k1,
        if v.kernel_matches() { "matches (k/d, k/d)" } else { "differs" });
    table.push_str(&summary);
    table.push('\n');
    let results = json!({
        "report": summary,
        "match": v.matches(),
        "kernel_match": v.kernel_matches(),
        "computed": v.computed,
        "expected": { "K0": v.expected_k0, "K1": v.expected_k1 },
    });
    Outcome {
        inputs: dims_input(k),
        results,
        warnings: v.warnings.clone(),
        verified: matched,
        table,
    }
}

fn boundary(k: &DimVector) -> Outcome {
    let m = boundary_matrix(k);
    let results = json!({ "rows": m.rows(), "cols": m.cols(), "matrix": m, "text": m.to_text() });
    let mut o = ok(dims_input(k), results, m.to_text());
    o.warnings.extend(k.scope_warning());
    o
}

fn resolution(a: &ResolutionArgs) -> Result<Outcome, String> {
    let tests: Vec<TestObject> = match a.test {
        Some(t) => vec![t],
        None => TestObject::BOTH.to_vec(),
    };
    let mut reports = Vec::new();
    let mut table = String::new();
    let mut all = true;
    for t in tests {
        let r = check_exactness(&a.dims, t, a.degree).map_err(|e| e.to_string())?;
        let good = r.is_exact() && r.action_matches;
        all &= good;
        let act: Vec<String> = r.t_action.iter().map(|row| row.join(" ")).collect();
        let _ = writeln!(
            table,
            "test {t}: {} (degree bound {}, ker d0 rank {}, t acts as [{}])",
            if good { "exact" } else { "NOT EXACT" },
            r.degree_bound,
            r.kernel_rank,
            act.join("; ")
        );
        reports.push(r);
    }
    Ok(Outcome {
        inputs: json!({ "dims": a.dims, "degree": a.degree, "test": a.test.map(|t| t.to_string()) }),
        results: json!({ "exact": all, "reports": reports }),
        warnings: a.dims.scope_warning().into_iter().collect(),
        verified: all,
        table,
    })
}

fn snf(a: &SnfArgs) -> Result<Outcome, String> {
    let text = read_source(&a.matrix)?;
    let m: IntMatrix = text.parse().map_err(|e| format!("{e}"))?;
    let d = smith_normal_form(&m);
    if !d.verify(&m) {
        return Err("internal error: Smith decomposition failed verification".into());
    }
    let factors: Vec<String> = d.invariant_factors.iter().map(ToString::to_string).collect();
    let table = format!(
        "shape    {}x{}\nrank     {}\nfactors  ({})\n",
        m.rows(),
        m.cols(),
        d.rank(),
        factors.join(",")
    );
    Ok(ok(json!({ "matrix": m }), json!({ "rank": d.rank(), "factors": d.invariant_factors.iter().map(ToString::to_string).collect::<Vec<_>>(), "s": d.s, "u": d.u, "v": d.v }), table))
}

fn parse_weights(s: &str) -> Result<Vec<num_rational::BigRational>, String> {
    s.split(',')
        .map(|p| p.trim().parse().map_err(|_| format!("invalid weight `{p}`")))
        .collect()
}

fn delta(a: &DeltaArgs) -> Result<Outcome, String> {
    let (alg, state) = if let Some(path) = &a.state {
        let spec: StateSpec = parse_json(&read_source(path)?, "state", "state")?;
        spec.build().map_err(|e| e.to_string())?
    } else {
        let dims = a.dims.clone().ok_or("give --state or --dims")?;
        let alg = FinDimAlgebra::new(dims);
        let state = match &a.weights {
            Some(w) => AlgState::from_block_weights(&alg, &parse_weights(w)?).map_err(|e| e.to_string())?,
            None if a.preset == "plancherel" => AlgState::plancherel(&alg),
            None => AlgState::normalized_trace(&alg),
        };
        (alg, state)
    };
    let op = mu_mu_star(&alg, &state).map_err(|e| e.to_string())?;
    let d = is_delta_form(&alg, &state).map_err(|e| e.to_string())?;
    let diag: Vec<String> = (0..op.len()).map(|i| op[i][i].to_string()).collect();
    let mut table = format!("blocks      {}\nmu mu* diag ({})\n", alg.block_sizes, diag.join(", "));
    match &d {
        DeltaForm::Delta { delta_squared, delta } => {
            let _ = writeln!(table, "delta-form  yes, delta^2 = {delta_squared}, delta ~ {delta:.12}");
        }
        DeltaForm::NotDelta { witness, expected, image } => {
            let idx = alg.index_of(*witness);
            let _ = writeln!(
                table,
                "delta-form  no, witness {witness}: mu mu* gives {} there, expected {expected}",
                image[idx]
            );
        }
    }
    let inputs = json!({ "blocks": alg.block_sizes, "density": state.density });
    Ok(ok(inputs.clone(), json!({ "state": inputs, "delta_form": d, "mu_mu_star": op }), table))
}

fn load_group(a: &TwistedArgs) -> Result<FiniteGroup, String> {
    if let Some(path) = &a.group_file {
        return parse_json(&read_source(path)?, "group", "group");
    }
    FiniteGroup::named(a.group.as_deref().unwrap_or("Z1")).map_err(|e| e.to_string())
}

fn twisted(a: &TwistedArgs) -> Result<Outcome, String> {
    let w = if let Some(path) = &a.cocycle {
        parse_json::<Cocycle>(&read_source(path)?, "cocycle", "cocycle")?
    } else if a.pauli {
        Cocycle::pauli()
    } else {
        let g = load_group(a)?;
        if a.random {
            let m = g.order() as u64;
            let gens = cocycle_lattice_generators(&g, m);
            sample_cocycle(&g, m, &gens, &mut ChaCha8Rng::seed_from_u64(a.seed))
        } else {
            Cocycle::trivial(g)
        }
    };
    let b = twisted_group_algebra(&w);
    let dec = block_decomposition(&b, a.seed).map_err(|e| e.to_string())?;
    let regular = w.regular_class_count();
    let consistent = regular == dec.center_dimension && dec.dimension() == b.dim();
    let blocks: Vec<String> = dec.blocks.iter().map(ToString::to_string).collect();
    let table = format!(
        "group order     {}\nroot order      {}\nergodic         {}\nregular classes {}\nblocks          {{{}}}\ncenter dim      {}\n",
        w.group().order(),
        w.root_order(),
        is_ergodic(&b),
        regular,
        blocks.join(","),
        dec.center_dimension
    );
    let mut results = json!({
        "cocycle": w,
        "dimension": b.dim(),
        "ergodic": is_ergodic(&b),
        "regular_class_count": regular,
        "decomposition": dec,
        "consistent": consistent,
    });
    if a.emit_algebra {
        results["algebra"] = to_value(&b);
    }
    let inputs = json!({ "group": a.group, "group_file": a.group_file, "cocycle": a.cocycle, "pauli": a.pauli, "random": a.random, "seed": a.seed });
    Ok(Outcome {
        inputs,
        results,
        warnings: Vec::new(),
        verified: consistent,
        table,
    })
}

fn extract(a: &ExtractArgs) -> Result<Outcome, String> {
    let b: GradedAlgebra = parse_json(&read_source(&a.algebra)?, "graded algebra", "algebra")?;
    let inputs = json!({ "algebra": a.algebra, "seed": a.seed });
    let data = match extract_torsion_data(&b) {
        Ok(d) => d,
        // The algebra parsed but falls outside the hypotheses.
        Err(
            e @ (TorsionError::NotErgodic(_)
            | TorsionError::ComponentDimension { .. }
            | TorsionError::NotInvertible(_)
            | TorsionError::NotClosed(_)
            | TorsionError::PhaseNotRootOfUnity(..)),
        ) => {
            return Ok(Outcome {
                inputs,
                results: json!({ "error": e.to_string(), "ergodic": is_ergodic(&b) }),
                warnings: Vec::new(),
                verified: false,
                table: format!("extraction failed: {e}\n"),
            });
        }
        Err(e) => return Err(e.to_string()),
    };
    let dec = block_decomposition(&b, a.seed).map_err(|e| e.to_string())?;
    let regular = data.cocycle.regular_class_count();
    let consistent = regular == dec.center_dimension;
    let support: Vec<String> = data.support.iter().map(ToString::to_string).collect();
    let blocks: Vec<String> = dec.blocks.iter().map(ToString::to_string).collect();
    let mut table = format!(
        "support         {{{}}} (order {})\nroot order      {}\nregular classes {}\nblocks          {{{}}}\ncocycle exponents:\n",
        support.join(","),
        data.support.len(),
        data.cocycle.root_order(),
        regular,
        blocks.join(",")
    );
    for row in data.cocycle.table() {
        let r: Vec<String> = row.iter().map(ToString::to_string).collect();
        let _ = writeln!(table, "  {}", r.join(" "));
    }
    Ok(Outcome {
        inputs,
        results: json!({ "torsion": data, "regular_class_count": regular, "decomposition": dec, "consistent": consistent }),
        warnings: Vec::new(),
        verified: consistent,
        table,
    })
}

fn magic(a: &MagicArgs) -> Result<Outcome, String> {
    let r = generator_rank_capped(a.n, a.max_n, Execution::default()).map_err(|e| e.to_string())?;
    let table = format!(
        "n                {}\nfull rank        {}\nrestricted rank  {}\nexpected         {}\nsaturated        {}\n",
        r.n, r.full_rank, r.restricted_rank, r.expected, r.saturated
    );
    let mut o = ok(json!({ "n": a.n, "max_n": a.max_n }), to_value(&r), table);
    o.verified = r.matches();
    if a.n < 4 {
        o.warnings.push(format!("n = {} < 4: the generator statement is asserted for n >= 4", a.n));
    }
    Ok(o)
}

fn sweep(a: &SweepArgs) -> Outcome {
    let cfg = SweepConfig {
        samples: a.samples,
        max_n: a.max_n,
        max_k: a.max_k,
        seed: a.seed,
        degree_bound: (!a.no_resolution).then_some(a.degree),
    };
    let exec = if a.sequential { Execution::Sequential } else { Execution::default() };
    let report = run_sweep(&cfg, exec);
    let mut table = String::new();
    for e in report.entries.iter().filter(|e| !e.passed()) {
        let _ = writeln!(table, "FAIL {} K0 = {} K1 = {} {:?}", e.dims, e.k0, e.k1, e.errors);
    }
    let _ = writeln!(
        table,
        "{} of {} sampled dimension vectors passed (seed {}, n <= {}, k <= {})",
        report.passed,
        report.entries.len(),
        a.seed,
        a.max_n,
        a.max_k
    );
    let warnings = report
        .entries
        .iter()
        .filter(|e| e.dims.scope_warning().is_some())
        .map(|e| format!("{} is below the dim A >= 4 threshold", e.dims))
        .collect();
    Outcome {
        inputs: to_value(&cfg),
        verified: report.all_passed(),
        results: to_value(&report),
        warnings,
        table,
    }
}
