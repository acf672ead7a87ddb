use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use f2coh::algebra::{Element, RewriteSystem};
use f2coh::bundles::{assemble_equivariant_seeds, EquivariantBundleSpec};
use f2coh::catalog::{self, Transgression};
use f2coh::index::{fh_index, verify_ideal_equality};
use f2coh::spectral::{reconstruct_ring, FiberSpec, Page, RingReconstruction, TransgressionSeed};
use f2coh::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "f2coh",
    version,
    about = "Mod 2 cohomology of sphere bundles and Borel constructions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Md,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert series and presentation of a catalog space
    Space {
        name: String,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Additive cohomology of a total space, optionally its ring
    Total {
        /// Catalog bundle (rho1..rho6, zeta_n, phi_n, free-sphere)
        bundle: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<u32>,
        /// Base space, instead of a catalog bundle
        #[arg(long, conflicts_with = "bundle")]
        base: Option<String>,
        /// Fiber such as point, S3, S3xS3, (S3)^2 or CP2
        #[arg(long, requires = "base")]
        fiber: Option<String>,
        /// Transgression `gen=poly`, repeatable
        #[arg(long = "seed", requires = "base")]
        seeds: Vec<String>,
        /// Bundle spec as a JSON file
        #[arg(long, conflicts_with_all = ["bundle", "base"])]
        spec: Option<String>,
        /// Compute the Borel construction when the bundle carries a group
        #[arg(long)]
        borel: bool,
        /// Also reconstruct the ring
        #[arg(long)]
        ring: bool,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Fadell–Husseini index of an equivariant bundle
    Index {
        bundle: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, conflicts_with = "bundle")]
        spec: Option<String>,
        /// Generators to compare with, separated by `;`
        #[arg(long)]
        against: Option<String>,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Replay the regression suite
    Verify {
        /// Family (catalog, spectral, gysin, index, properties) or check numbers
        #[arg(long)]
        subset: Option<String>,
        #[arg(long)]
        bound: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Catalog listings
    Catalog {
        #[command(subcommand)]
        what: CatalogCommand,
    },
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// List spaces and bundles
    List {
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Engine(String),
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownName { .. } | Error::Parse { .. } | Error::InvalidSpec(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Engine(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Space {
            name,
            bound,
            format,
        } => space(&name, bound, format),
        Command::Total {
            bundle,
            n,
            k,
            base,
            fiber,
            seeds,
            spec,
            borel,
            ring,
            bound,
            format,
        } => total(TotalArgs {
            bundle,
            n,
            k,
            base,
            fiber,
            seeds,
            spec,
            borel,
            ring,
            bound,
            format,
        }),
        Command::Index {
            bundle,
            n,
            k,
            spec,
            against,
            bound,
            format,
        } => index(bundle, n, k, spec, against, bound, format),
        Command::Verify {
            subset,
            bound,
            format,
        } => verify(subset, bound, format),
        Command::Catalog {
            what: CatalogCommand::List { format },
        } => list(format),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Engine(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn json_out(v: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("json"))
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(sep)
}

fn space(name: &str, bound: Option<u32>, format: Format) -> Outcome {
    let entry = catalog::space(name)?;
    let p = &entry.presentation;
    let bound = bound
        .unwrap_or(entry.manifold_dim.unwrap_or(12))
        .max(p.max_relation_degree());
    let ring = RewriteSystem::normalize(p, bound)?;
    let series = ring.hilbert_series(bound)?;
    let basis = |d: u32| -> Vec<String> {
        ring.degree_basis(d)
            .map(|b| b.iter().map(|m| p.render_monomial(m)).collect())
            .unwrap_or_default()
    };
    Ok(match format {
        Format::Json => json_out(&json!({
            "name": entry.name,
            "presentation": p,
            "manifold_dim": entry.manifold_dim,
            "bound": bound,
            "series": series,
            "rules": ring.rule_strings(),
            "basis": (0..=bound).map(basis).collect::<Vec<_>>(),
        })),
        Format::Md => {
            let mut s = format!(
                "**{}**: {p}\n\n| degree | dim | basis |\n|---|---|---|\n",
                entry.name
            );
            for d in 0..=bound {
                let _ = writeln!(
                    s,
                    "| {d} | {} | {} |",
                    series[d as usize],
                    basis(d).join(", ")
                );
            }
            s
        }
        Format::Text => format!(
            "{}: {p}\nseries (degrees 0..{bound}): {}\n",
            entry.name,
            join(&series, ",")
        ),
    })
}

struct TotalArgs {
    bundle: Option<String>,
    n: Option<usize>,
    k: Option<u32>,
    base: Option<String>,
    fiber: Option<String>,
    seeds: Vec<String>,
    spec: Option<String>,
    borel: bool,
    ring: bool,
    bound: Option<u32>,
    format: Format,
}

fn read_spec(path: &str) -> Result<EquivariantBundleSpec, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    Ok(catalog::parse_bundle_json(&text)?)
}

/// Top degree of `H*(B) ⊗ H*(F)`, if finite.
fn top_degree(spec: &EquivariantBundleSpec) -> Result<Option<u32>, Failure> {
    if spec.group.rank > 0 {
        return Ok(None);
    }
    let probe = 64;
    let ring = RewriteSystem::normalize(&spec.base, probe.max(spec.base.max_relation_degree()))?;
    let series = ring.hilbert_series(probe)?;
    let base_top = series.iter().rposition(|d| *d > 0).unwrap_or(0) as u32;
    if base_top + 8 >= probe {
        return Ok(None);
    }
    Ok(Some(base_top + spec.fiber.top_degree()))
}

fn total(a: TotalArgs) -> Outcome {
    let (name, spec) = if let Some(path) = &a.spec {
        (path.clone(), read_spec(path)?)
    } else if let Some(base) = &a.base {
        let base = catalog::space(base)?.presentation;
        let fiber = FiberSpec::parse(a.fiber.as_deref().unwrap_or("point"))?;
        (
            format!("{} over {}", fiber, a.base.as_deref().unwrap_or("")),
            EquivariantBundleSpec::new(base, fiber),
        )
    } else {
        let b = a
            .bundle
            .as_deref()
            .ok_or_else(|| Failure::Usage("give a bundle name, --base or --spec".into()))?;
        let entry = catalog::bundle(b, a.n, a.k)?;
        if let Transgression::Undetermined(why) = &entry.transgression {
            return Err(Failure::Engine(format!(
                "{} cannot be computed: {why}",
                entry.name
            )));
        }
        (entry.name, entry.spec)
    };
    let spec = if a.borel {
        spec
    } else {
        spec.non_equivariant()
    };
    let bound = match a.bound {
        Some(b) => b,
        None => match top_degree(&spec)? {
            Some(top) if a.ring => 2 * top,
            Some(top) => top,
            None => 16,
        },
    };
    let mut assembled = assemble_equivariant_seeds(&spec, bound)?;
    for s in &a.seeds {
        let (g, img) = s
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--seed expects gen=poly, got {s:?}")))?;
        let parsed = TransgressionSeed::from_strings(
            &assembled.ring,
            &assembled.fiber,
            &[(g.trim(), img.trim())],
        )?;
        for (k, v) in parsed.images() {
            assembled.seed.insert(k, v.clone());
        }
    }
    let page = Page::run_to_einfty(&assembled.ring, &assembled.fiber, &assembled.seed, bound)?;
    let totals = page.additive_total();
    let ring = if a.ring {
        Some(reconstruct_ring(&page)?)
    } else {
        None
    };
    let reps: Vec<Vec<String>> = (0..=bound)
        .map(|n| (0..=n).flat_map(|p| page.labels(p, n - p)).collect())
        .collect();
    Ok(match a.format {
        Format::Json => json_out(&json!({
            "bundle": name,
            "bound": bound,
            "page": page.dump(),
            "totals": totals,
            "ring": ring.as_ref().map(ring_json),
        })),
        Format::Md => {
            let mut s = format!(
                "**{name}**, stable at E_{}\n\n| degree | dim | representatives |\n|---|---|---|\n",
                page.r()
            );
            for n in 0..=bound as usize {
                if totals[n] > 0 {
                    let _ = writeln!(s, "| {n} | {} | {} |", totals[n], reps[n].join(", "));
                }
            }
            if let Some(r) = &ring {
                let _ = write!(s, "\n{}", ring_text(r));
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "{name}\n{}totals (degrees 0..{bound}): {}\n",
                page.text_grid(),
                join(&totals, ",")
            );
            if let Some(r) = &ring {
                s.push_str(&ring_text(r));
            }
            s
        }
    })
}

fn ring_json(r: &RingReconstruction) -> Value {
    match r {
        RingReconstruction::Presented {
            presentation,
            labels,
            open_extensions,
        } => json!({
            "presentation": presentation,
            "generators": labels,
            "open_extensions": open_extensions,
        }),
        RingReconstruction::AdditiveOnly { totals, reason } => json!({
            "additive_only": true,
            "totals": totals,
            "reason": reason,
        }),
    }
}

fn ring_text(r: &RingReconstruction) -> String {
    match r {
        RingReconstruction::Presented {
            presentation,
            labels,
            open_extensions,
        } => {
            let mut s = format!("ring: {presentation}\n");
            for l in labels {
                let _ = writeln!(
                    s,
                    "  {} at ({}, {}) represented by {}",
                    l.name, l.p, l.q, l.representative
                );
            }
            if open_extensions.is_empty() {
                s.push_str("no extension problems\n");
            } else {
                for e in open_extensions {
                    let _ = writeln!(
                        s,
                        "  open extension: {} = 0 in E_inf at ({}, {}); higher filtration in degree {} has dimension {}",
                        e.relation, e.p, e.q, e.degree, e.higher_filtration_dim
                    );
                }
            }
            s
        }
        RingReconstruction::AdditiveOnly { reason, .. } => {
            format!("ring: additive only ({reason})\n")
        }
    }
}

fn index(
    bundle: Option<String>,
    n: Option<usize>,
    k: Option<u32>,
    spec: Option<String>,
    against: Option<String>,
    bound: Option<u32>,
    format: Format,
) -> Outcome {
    let (name, spec) = match (&spec, &bundle) {
        (Some(path), _) => (path.clone(), read_spec(path)?),
        (None, Some(b)) => {
            let e = catalog::bundle(b, n, k)?;
            (e.name, e.spec)
        }
        (None, None) => return Err(Failure::Usage("give a bundle name or --spec".into())),
    };
    if spec.group.rank == 0 {
        return Err(Failure::Usage(format!("{name} has no group action")));
    }
    let bound = bound.unwrap_or(12);
    let ideal = fh_index(&spec, bound)?;
    let comparison = match &against {
        Some(list) => {
            let gens = list
                .split(';')
                .map(|s| Element::parse(ideal.ring(), s.trim()))
                .collect::<Result<Vec<_>, _>>()?;
            Some((
                gens.iter().map(Element::render).collect::<Vec<_>>(),
                verify_ideal_equality(ideal.generators(), &gens, bound)?,
            ))
        }
        None => None,
    };
    let gens = ideal.generator_strings();
    let out = match format {
        Format::Json => json_out(&json!({
            "ambient": ideal.ring().source(),
            "bound": bound,
            "generators": gens,
            "hilbert": ideal.hilbert(),
            "verified_against": comparison.as_ref().map(|(g, c)| json!({
                "generators": g,
                "equal": c.equal,
                "first_failure": c.first_failure,
            })),
        })),
        Format::Md => {
            let mut s = format!(
                "**index of {name}** in {}\n\n| degree | generators |\n|---|---|\n",
                ideal.ring().source()
            );
            for g in ideal.generators() {
                let _ = writeln!(s, "| {} | {} |", g.degree(), g.render());
            }
            s
        }
        Format::Text => {
            let mut s = format!(
                "index of {name} (bound {bound})\nambient: {}\ngenerators:\n",
                ideal.ring().source()
            );
            for g in &gens {
                let _ = writeln!(s, "  {g}");
            }
            let _ = writeln!(s, "hilbert: {}", join(&ideal.hilbert(), ","));
            if let Some((_, c)) = &comparison {
                let _ = writeln!(
                    s,
                    "equal to given ideal: {}{}",
                    c.equal,
                    c.first_failure.map_or(String::new(), |d| format!(
                        " (first difference in degree {d})"
                    ))
                );
            }
            s
        }
    };
    match comparison {
        Some((_, c)) if !c.equal => {
            print!("{out}");
            Err(Failure::Check)
        }
        _ => Ok(out),
    }
}

fn verify(subset: Option<String>, bound: Option<u32>, format: Format) -> Outcome {
    if let Some(s) = &subset {
        let fams = f2coh::verify::families();
        let ok = s == "all"
            || s.split(',')
                .all(|p| fams.contains(&p) || p.parse::<u32>().is_ok_and(|n| (1..=8).contains(&n)));
        if !ok {
            return Err(Failure::Usage(format!(
                "unknown subset {s:?}; use all, check numbers 1-8 or one of {}",
                fams.join(", ")
            )));
        }
    }
    let results = f2coh::verify::run(subset.as_deref(), bound);
    let out = match format {
        Format::Json => json_out(&json!(results)),
        Format::Md => {
            let mut s =
                String::from("| check | family | result | ms | detail |\n|---|---|---|---|---|\n");
            for r in &results {
                let _ = writeln!(
                    s,
                    "| {} {} | {} | {} | {} | {} |",
                    r.id,
                    r.name,
                    r.family,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.millis,
                    r.detail
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in &results {
                let _ = writeln!(
                    s,
                    "{} [{}] {} ({} ms)\n    {}",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.id,
                    r.name,
                    r.millis,
                    r.detail
                );
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            let _ = writeln!(s, "{} checks, {failed} failed", results.len());
            s
        }
    };
    if results.iter().all(|r| r.passed) {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Check)
    }
}

fn list(format: Format) -> Outcome {
    let spaces = catalog::spaces();
    let bundles = catalog::bundles();
    Ok(match format {
        Format::Json => json_out(&json!({
            "spaces": spaces,
            "space_names": catalog::space_names(),
            "bundles": bundles,
            "bundle_names": catalog::bundle_names(),
        })),
        Format::Md => {
            let mut s = String::from("| space | dim | presentation |\n|---|---|---|\n");
            for e in &spaces {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} |",
                    e.name,
                    e.manifold_dim.map_or("-".into(), |d| d.to_string()),
                    e.presentation
                );
            }
            s.push_str("\n| bundle | base | fiber | description |\n|---|---|---|---|\n");
            for b in &bundles {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {} |",
                    b.name, b.base, b.spec.fiber, b.description
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::from("spaces:\n");
            for e in &spaces {
                let _ = writeln!(s, "  {:<10} {}", e.name, e.presentation);
            }
            let _ = writeln!(s, "  parametrized: Sphere(k), CP(m), BZ2^m");
            s.push_str("bundles:\n");
            for b in &bundles {
                let flag = match &b.transgression {
                    Transgression::Determined => "",
                    Transgression::Undetermined(_) => " [undetermined]",
                };
                let _ = writeln!(s, "  {:<15} {}{flag}", b.name, b.description);
            }
            s
        }
    })
}
