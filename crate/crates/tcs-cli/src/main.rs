//! `tcs`: batch front end for the tcs-lattice library.
//!
//! Exit codes: 0 success, 1 domain failure (no certificate, impossible
//! embedding, failed check), 2 usage or parse error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tcs_lattice::blocks::{describe, Catalog};
use tcs_lattice::embed::{
    assess, construct_embedding, EmbeddingStatus, EmbeddingVerdict, Strategy,
};
use tcs_lattice::exactalg::{parse_int_list, IntMat};
use tcs_lattice::g2alg::verify_identity_suite;
use tcs_lattice::glue::{orthogonal_pushout, pushout_signature_check, PushoutSpec};
use tcs_lattice::lattice::Lattice;
use tcs_lattice::matching::{
    build_certificate, dump_certificate, geography_general, geography_human, geography_rank1,
    geography_summary, geography_tsv, rank_one_r_vector, MatchMode, MatchOptions, PairFilter,
    Resolutions, DEFAULT_SEARCH_BOUND,
};
use tcs_lattice::tcs::{
    compute_invariants, report_kv, report_tsv_header, report_tsv_row, sanity_suite,
    torsion_linking, GluingConfig,
};

#[derive(Parser)]
#[command(
    name = "tcs",
    version,
    about = "Lattice computations for twisted connected sum G2-manifolds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect the building block catalog (TCS_TABLES_DIR overrides the bundled tables).
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Orthogonal pushout N+ ⊥_R N- of two blocks.
    Pushout {
        #[arg(long)]
        plus: String,
        #[arg(long)]
        minus: String,
        /// Gram matrix of R, e.g. "[[-12]]".
        #[arg(long)]
        r: String,
        /// Basis of R in N+ coordinates; searched for when R has rank one.
        #[arg(long)]
        x_plus: Option<String>,
        #[arg(long)]
        x_minus: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        search_bound: u64,
    },
    /// Primitive embedding of a lattice into the K3 lattice.
    Embed {
        /// File holding the Gram matrix of W.
        #[arg(long)]
        w: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        search_bound: u64,
    },
    /// Build a matching certificate for a pair of blocks.
    Match {
        #[arg(long)]
        plus: String,
        #[arg(long)]
        minus: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Gram matrix of R for orthogonal gluing.
        #[arg(long)]
        r: Option<String>,
        #[arg(long)]
        x_plus: Option<String>,
        #[arg(long)]
        x_minus: Option<String>,
        /// Glue group type for perp-over, e.g. "2" or "4,4".
        #[arg(long)]
        glue_type: Option<String>,
        /// Record that the ample cone condition has been checked by hand.
        #[arg(long)]
        assert_ample: bool,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        search_bound: u64,
        /// Write the resulting gluing config to this file.
        #[arg(long)]
        config_out: Option<PathBuf>,
    },
    /// Invariants of the 7-manifold of a gluing config.
    Invariants {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Human)]
        format: Format,
    },
    /// Census statistics over block pairs.
    Geography {
        #[arg(value_enum)]
        table: GeographyTable,
        #[arg(long, default_value = "none")]
        filter: PairFilter,
        #[arg(long, default_value = "best")]
        resolutions: Resolutions,
        /// Worker threads; output does not depend on it.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Pointwise G2 linear algebra.
    G2 {
        #[command(subcommand)]
        action: G2Action,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show {
        id: String,
    },
    /// Validate the bundled tables, or the given catalog files.
    Validate {
        files: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum G2Action {
    Verify {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Perp,
    PerpOver,
    Orth,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Tsv,
    Summary,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeographyTable {
    Table3,
    General,
}

/// A failed command: exit code and the text to print.
struct Failure {
    code: u8,
    text: String,
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure {
        code: 2,
        text: format!("error: {msg}\n"),
    }
}

fn domain(reason: &str, detail: impl std::fmt::Display) -> Failure {
    Failure {
        code: 1,
        text: format!("status = failed\nreason = {reason}\ndetail = {detail}\n"),
    }
}

fn catalog() -> Result<Catalog, Failure> {
    Catalog::bundled().map_err(usage)
}

fn parse_matrix(s: &str) -> Result<IntMat, Failure> {
    let t = s.trim();
    if t.starts_with("[[") {
        t.parse::<IntMat>()
            .map_err(|e| usage(format!("bad matrix `{s}`: {e}")))
    } else {
        parse_int_list(t)
            .map(|v| IntMat::row_vector(&v))
            .map_err(|e| usage(format!("bad vector `{s}`: {e}")))
    }
}

fn parse_gram(s: &str) -> Result<Lattice, Failure> {
    Lattice::new(parse_matrix(s)?).map_err(|e| usage(format!("bad Gram matrix `{s}`: {e}")))
}

/// `R` and its bases in both blocks; rank-one bases are searched for when omitted.
fn gluing_data(
    n_plus: &Lattice,
    n_minus: &Lattice,
    r: &str,
    x_plus: Option<&str>,
    x_minus: Option<&str>,
    bound: u64,
) -> Result<(Lattice, IntMat, IntMat), Failure> {
    let r = parse_gram(r)?;
    let side = |n: &Lattice, x: Option<&str>, name: &str| -> Result<IntMat, Failure> {
        match x {
            Some(s) => parse_matrix(s),
            None if r.rank() == 1 => rank_one_r_vector(n, r.gram().get(0, 0), bound)
                .map(|v| IntMat::row_vector(&v))
                .ok_or_else(|| {
                    domain(
                        "NoGluingVector",
                        format!(
                            "no primitive vector of norm {} in {name}",
                            r.gram().get(0, 0)
                        ),
                    )
                }),
            None => Err(usage(format!(
                "--x-{name} is required when R has rank above one"
            ))),
        }
    };
    Ok((
        r.clone(),
        side(n_plus, x_plus, "plus")?,
        side(n_minus, x_minus, "minus")?,
    ))
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Catalog { action } => run_catalog(action),
        Command::Pushout {
            plus,
            minus,
            r,
            x_plus,
            x_minus,
            search_bound,
        } => {
            let cat = catalog()?;
            let (p, m) = (
                cat.get(&plus).map_err(usage)?,
                cat.get(&minus).map_err(usage)?,
            );
            let (np, nm) = (p.try_lattice(), m.try_lattice());
            let (Some(np), Some(nm)) = (np, nm) else {
                return Err(domain("Gramless", "both blocks need a Gram matrix"));
            };
            let (r, xp, xm) = gluing_data(
                &np,
                &nm,
                &r,
                x_plus.as_deref(),
                x_minus.as_deref(),
                search_bound,
            )?;
            let spec = PushoutSpec {
                n_plus: np.clone(),
                n_minus: nm.clone(),
                r: r.clone(),
                emb_plus: xp,
                emb_minus: xm,
            };
            let po = orthogonal_pushout(&spec).map_err(|e| domain("PushoutFailure", e))?;
            let sig = pushout_signature_check(&po.w, np.rank(), nm.rank(), r.rank());
            let mut s = String::new();
            let _ = writeln!(s, "w_gram = {}", po.w.gram());
            let _ = writeln!(s, "plus_basis = {}", po.plus_basis);
            let _ = writeln!(s, "minus_basis = {}", po.minus_basis);
            let _ = writeln!(s, "rank = {}", po.w.rank());
            let _ = writeln!(s, "signature_check = {sig}");
            if !sig {
                return Err(Failure {
                    code: 1,
                    text: s + "status = failed\nreason = SignatureMismatch\n",
                });
            }
            Ok(s)
        }
        Command::Embed { w, search_bound } => {
            let text =
                std::fs::read_to_string(&w).map_err(|e| usage(format!("{}: {e}", w.display())))?;
            let body: String = text
                .lines()
                .filter(|l| !l.trim_start().starts_with('#'))
                .collect::<Vec<_>>()
                .join(" ");
            let lat = parse_gram(&body)?;
            run_embed(&lat, search_bound)
        }
        Command::Match {
            plus,
            minus,
            mode,
            r,
            x_plus,
            x_minus,
            glue_type,
            assert_ample,
            search_bound,
            config_out,
        } => {
            let cat = catalog()?;
            let (p, m) = (
                cat.get(&plus).map_err(usage)?,
                cat.get(&minus).map_err(usage)?,
            );
            let mode = match mode {
                ModeArg::Perp => MatchMode::PerpendicularPrimitive,
                ModeArg::PerpOver => {
                    let t =
                        glue_type.ok_or_else(|| usage("--glue-type is required for perp-over"))?;
                    MatchMode::PerpendicularOverlattice {
                        glue_type: parse_int_list(&t).map_err(usage)?,
                    }
                }
                ModeArg::Orth => {
                    let r = r.ok_or_else(|| usage("--r is required for orth"))?;
                    let (Some(np), Some(nm)) = (p.try_lattice(), m.try_lattice()) else {
                        return Err(domain("Gramless", "both blocks need a Gram matrix"));
                    };
                    let (r, x_plus, x_minus) = gluing_data(
                        &np,
                        &nm,
                        &r,
                        x_plus.as_deref(),
                        x_minus.as_deref(),
                        search_bound,
                    )?;
                    MatchMode::Orthogonal { r, x_plus, x_minus }
                }
            };
            let opts = MatchOptions {
                ample_cone_asserted: assert_ample,
                search_bound,
            };
            let cert = build_certificate(p, m, &mode, &opts).map_err(|e| domain(e.code(), e))?;
            if let Some(path) = config_out {
                let text = format!("# {plus} x {minus}\n{}", cert.to_config().to_text());
                std::fs::write(&path, text)
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            }
            Ok(format!("status = ok\n{}", dump_certificate(&cert)))
        }
        Command::Invariants { config, format } => {
            let cat = catalog()?;
            let cfg = GluingConfig::load(&config, &cat)
                .map_err(|e| usage(format!("{}: {e}", config.display())))?;
            let inv = compute_invariants(&cfg).map_err(|e| domain("InvariantsFailure", e))?;
            let mut s = match format {
                Format::Tsv => format!("{}\n{}\n", report_tsv_header(), report_tsv_row(&inv)),
                _ => report_kv(&inv),
            };
            let table = torsion_linking(&cfg);
            if format == Format::Human && !table.generators.is_empty() {
                for row in &table.values {
                    let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                    let _ = writeln!(s, "linking = {}", cells.join(" "));
                }
            }
            let failed: Vec<_> = sanity_suite(&inv)
                .into_iter()
                .filter(|c| !c.passed)
                .collect();
            if let Some(c) = failed.first() {
                return Err(Failure {
                    code: 1,
                    text: s + &format!(
                        "status = failed\nreason = {}\ndetail = {}\n",
                        c.name, c.detail
                    ),
                });
            }
            Ok(s)
        }
        Command::Geography {
            table,
            filter,
            resolutions,
            jobs,
            format,
        } => {
            let cat = catalog()?;
            let compute = || match table {
                GeographyTable::Table3 => geography_rank1(&cat),
                GeographyTable::General => geography_general(&cat, filter, resolutions),
            };
            let report = match jobs {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(usage)?
                    .install(compute),
                None => compute(),
            };
            Ok(match format {
                Format::Tsv => geography_tsv(&report),
                Format::Summary => geography_summary(&report),
                Format::Human => geography_human(&report),
            })
        }
        Command::G2 {
            action: G2Action::Verify { samples, seed },
        } => {
            let report = verify_identity_suite(samples, seed);
            if report.passed() {
                Ok(report.to_string())
            } else {
                Err(Failure {
                    code: 1,
                    text: report.to_string(),
                })
            }
        }
    }
}

fn run_catalog(action: CatalogAction) -> Result<String, Failure> {
    match action {
        CatalogAction::List => {
            let cat = catalog()?;
            let mut s = String::from("id\tkind\trank\tb3_Z\trk_K\tdiv_c2\n");
            for r in cat.records() {
                let b3 = r.b3_z.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
                let div: Vec<String> = r.div_c2.iter().map(|v| v.to_string()).collect();
                let div = if div.is_empty() {
                    "-".into()
                } else {
                    div.join(",")
                };
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{b3}\t{}\t{div}",
                    r.id, r.kind, r.rank, r.rk_k
                );
            }
            Ok(s)
        }
        CatalogAction::Show { id } => Ok(describe(catalog()?.get(&id).map_err(usage)?)),
        CatalogAction::Validate { files } => {
            if files.is_empty() {
                let cat = catalog()?;
                return Ok(format!("ok: {} records\n", cat.len()));
            }
            let mut s = String::new();
            let mut bad = false;
            for f in files {
                match Catalog::load(&f) {
                    Ok(c) => {
                        let _ = writeln!(s, "ok: {}: {} records", f.display(), c.len());
                    }
                    Err(e) => {
                        bad = true;
                        let _ = writeln!(s, "invalid: {}: {e}", f.display());
                    }
                }
            }
            if bad {
                Err(Failure { code: 1, text: s })
            } else {
                Ok(s)
            }
        }
    }
}

fn run_embed(w: &Lattice, bound: u64) -> Result<String, Failure> {
    let mut verdict = assess(w);
    if verdict.status == EmbeddingStatus::Unknown
        || matches!(
            verdict.status,
            EmbeddingStatus::ExistsPrimitiveByCriterion(_)
        )
    {
        for strategy in [Strategy::Library, Strategy::Backtracking] {
            if strategy == Strategy::Backtracking && w.rank() > 6 {
                continue;
            }
            let found = construct_embedding(w, strategy, bound, &[w.rank()])
                .map_err(|e| domain("EmbeddingError", e))?;
            if matches!(&found.status, EmbeddingStatus::ExistsConstructed(c) if c.primitive) {
                verdict = found;
                break;
            }
        }
    }
    let mut s = format!("status = {}\n", verdict.status.tag());
    let EmbeddingVerdict { status, unique } = &verdict;
    match status {
        EmbeddingStatus::ExistsPrimitiveByCriterion(c) => {
            let _ = writeln!(s, "criterion = {c}");
        }
        EmbeddingStatus::ExistsConstructed(c) => {
            let _ = writeln!(s, "method = {}", c.method);
            let _ = writeln!(s, "embedding = {}", c.basis);
        }
        EmbeddingStatus::ImpossibleByObstruction { modulus, residue } => {
            let _ = writeln!(s, "obstruction = no norm {residue} mod {modulus}");
        }
        _ => {}
    }
    if let Some(u) = unique {
        let _ = writeln!(s, "unique = {u}");
    }
    match status {
        EmbeddingStatus::ImpossibleByNecessary
        | EmbeddingStatus::ImpossibleByObstruction { .. } => Err(Failure {
            code: 1,
            text: s + "reason = EmbeddingImpossible\n",
        }),
        EmbeddingStatus::Unknown => Err(Failure {
            code: 1,
            text: s + "reason = EmbeddingUnknown\n",
        }),
        _ => Ok(s),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure { code, text }) => {
            if code == 2 {
                eprint!("{text}");
            } else {
                print!("{text}");
            }
            ExitCode::from(code)
        }
    }
}
