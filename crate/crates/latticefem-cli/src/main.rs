//! Command-line front end: lattice decompositions, dimension tables, exact
//! element/mesh verification, and SVG rendering of 2-D decompositions.
//!
//! Exit codes: 0 all checks pass, 1 a check or parameter constraint failed,
//! 2 usage error.

mod svg;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use latticefem::arith::{format_rational, ratio, Rational};
use latticefem::bernstein::SimplexGeometry;
use latticefem::decomp::{
    hermite_decomposition, lagrange_decomposition, smooth_decomposition, validate_smoothness_vector,
    verify_partition, LatticeDecomposition,
};
use latticefem::dof::{
    check_block_triangular, check_unisolvence, dimension_table, single_element_counts, ElementSpec,
    FramePolicy,
};
use latticefem::mesh::{continuity_check, global_dof_map, JumpOrderPolicy, Mesh};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "latticefem", version, about = "Simplicial lattice decompositions and smooth finite element verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a lattice decomposition and print or render it
    Decompose(DecomposeArgs),
    /// Run exact verification checks (partition, unisolvence, block
    /// structure, and mesh continuity when a mesh is given)
    Verify(VerifyArgs),
    /// Per-level dimension table with closed-form cross-checks
    Dims(DimsArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Family {
    Lagrange,
    Hermite,
    Smooth,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Svg,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Frame {
    Dual,
    Canonical,
}

#[derive(Args)]
struct ElementArgs {
    /// Element family
    #[arg(long, value_enum)]
    family: Family,
    /// Simplex dimension n
    #[arg(short = 'n', long = "dimension")]
    n: usize,
    /// Polynomial degree k
    #[arg(short = 'k', long = "degree")]
    k: u32,
    /// Vertex smoothness m (Hermite family)
    #[arg(short = 'm', long = "vertex-order")]
    m: Option<u32>,
    /// Smoothness vector r_0,...,r_n (smooth family)
    #[arg(short = 'r', long = "smoothness", value_delimiter = ',')]
    r: Option<Vec<u32>>,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    element: ElementArgs,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Output path (default: stdout, or LATTICEFEM_OUT_DIR for SVG)
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    element: ElementArgs,
    /// Mesh JSON to check global continuity on
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Normal-frame policy for the element checks
    #[arg(long, value_enum, default_value = "dual")]
    frame: Frame,
}

#[derive(Args)]
struct DimsArgs {
    #[command(flatten)]
    element: ElementArgs,
    /// Mesh JSON supplying the face counts
    #[arg(long)]
    mesh: Option<PathBuf>,
    /// Explicit face counts |Δ_0|,...,|Δ_n| (default: one element)
    #[arg(long, value_delimiter = ',')]
    counts: Option<Vec<u64>>,
    /// Output format
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Decompose(args) => cmd_decompose(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Dims(args) => cmd_dims(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

impl ElementArgs {
    fn spec(&self) -> Result<ElementSpec> {
        match self.family {
            Family::Lagrange => Ok(ElementSpec::lagrange(self.n, self.k)?),
            Family::Hermite => {
                let m = self.m.ok_or_else(|| anyhow!("the Hermite family needs -m"))?;
                Ok(ElementSpec::hermite(self.n, self.k, m)?)
            }
            Family::Smooth => {
                let r = self.r.as_ref().ok_or_else(|| anyhow!("the smooth family needs -r"))?;
                if r.len() != self.n + 1 {
                    return Err(anyhow!(
                        "smoothness vector needs n + 1 = {} entries, got {}",
                        self.n + 1,
                        r.len()
                    ));
                }
                Ok(ElementSpec::smooth_nd(self.k, r)?)
            }
        }
    }

    fn decomposition(&self) -> Result<LatticeDecomposition> {
        Ok(match self.family {
            Family::Lagrange => lagrange_decomposition(self.n, self.k)?,
            Family::Hermite => {
                let m = self.m.ok_or_else(|| anyhow!("the Hermite family needs -m"))?;
                hermite_decomposition(self.n, self.k, m)?
            }
            Family::Smooth => {
                let r = self.r.as_ref().ok_or_else(|| anyhow!("the smooth family needs -r"))?;
                let sv = validate_smoothness_vector(r, self.k)?;
                smooth_decomposition(&sv)?
            }
        })
    }
}

fn cmd_decompose(args: DecomposeArgs) -> Result<bool> {
    let decomposition = args.element.decomposition()?;
    match args.format {
        Format::Text => {
            let text = decomposition_text(&decomposition);
            write_output(args.out.as_deref(), None, &text)?;
        }
        Format::Json => {
            write_output(args.out.as_deref(), None, &decomposition.to_json())?;
        }
        Format::Svg => {
            if decomposition.n() != 2 {
                return Err(anyhow!("SVG rendering is available for n = 2 only"));
            }
            let image = svg::render_decomposition(&decomposition);
            let default_name = format!(
                "decomposition-n{}-k{}.svg",
                decomposition.n(),
                decomposition.k()
            );
            write_output(args.out.as_deref(), Some(&default_name), &image)?;
        }
    }
    Ok(true)
}

fn decomposition_text(d: &LatticeDecomposition) -> String {
    use latticefem::decomp::DecompositionKind;
    let label = match d.kind() {
        DecompositionKind::Lagrange => "Lagrange".to_string(),
        DecompositionKind::Hermite { m } => format!("Hermite (m = {m})"),
        DecompositionKind::Smooth { r } => format!("smooth (r = {r:?})"),
    };
    let mut out = String::new();
    out.push_str(&format!("{label} decomposition of the degree-{} lattice on a {}-simplex\n", d.k(), d.n()));
    for piece in d.pieces() {
        let class = match piece.face.dim() {
            0 => "vertex",
            d if d == piece.face.ambient() => "interior",
            1 => "edge",
            _ => "face",
        };
        out.push_str(&format!(
            "  f{:?} ({class}): {} nodes\n",
            piece.face.indices(),
            piece.nodes.len()
        ));
    }
    out.push_str(&format!("total {} nodes\n", d.total()));
    out
}

fn write_output(out: Option<&Path>, default_name: Option<&str>, content: &str) -> Result<()> {
    let target: Option<PathBuf> = match (out, default_name) {
        (Some(path), _) => Some(path.to_path_buf()),
        (None, Some(name)) => std::env::var_os("LATTICEFEM_OUT_DIR")
            .map(|dir| PathBuf::from(dir).join(name)),
        (None, None) => None,
    };
    match target {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)
                        .with_context(|| format!("creating {}", parent.display()))?;
                }
            }
            std::fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
            println!("{}", path.display());
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let mut checks: Vec<serde_json::Value> = Vec::new();
    let mut all_pass = true;

    let spec = match args.element.spec() {
        Ok(spec) => spec,
        Err(err) => {
            checks.push(serde_json::json!({
                "name": "parameters",
                "pass": false,
                "detail": format!("{err:#}"),
            }));
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({"pass": false, "checks": checks}))?
            );
            return Ok(false);
        }
    };
    checks.push(serde_json::json!({"name": "parameters", "pass": true}));

    let decomposition = spec.decomposition()?;
    let partition = verify_partition(&decomposition)?;
    all_pass &= partition.ok();
    checks.push(serde_json::json!({
        "name": "partition",
        "pass": partition.ok(),
        "duplicated": partition.duplicated.iter().map(|a| a.entries().to_vec()).collect::<Vec<_>>(),
        "missing": partition.missing.iter().map(|a| a.entries().to_vec()).collect::<Vec<_>>(),
    }));

    let geometry = SimplexGeometry::reference(spec.n());
    let policy = match args.frame {
        Frame::Dual => FramePolicy::Dual,
        Frame::Canonical => FramePolicy::Canonical,
    };
    let unisolvence = check_unisolvence(&spec, &geometry, policy)?;
    all_pass &= unisolvence.invertible;
    checks.push(serde_json::json!({
        "name": "unisolvence",
        "pass": unisolvence.invertible,
        "dimension": unisolvence.dimension,
        "determinant": format_rational(&unisolvence.determinant),
    }));

    let blocks = check_block_triangular(&spec, &geometry, policy)?;
    all_pass &= blocks.holds;
    checks.push(serde_json::json!({
        "name": "block_triangular",
        "pass": blocks.holds,
        "violations": blocks.violations.iter().map(|v| serde_json::json!({
            "row": v.row,
            "col": v.col,
            "value": format_rational(&v.value),
        })).collect::<Vec<_>>(),
        "diagonal_blocks": blocks.diagonal.iter().map(|d| serde_json::json!({
            "face": d.face.indices(),
            "size": d.size,
            "invertible": d.invertible,
        })).collect::<Vec<_>>(),
    }));

    if let Some(path) = &args.mesh {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let mesh = Mesh::from_json(&text)?;
        let map = global_dof_map(&mesh, &spec)?;
        // deterministic irregular coefficients
        let coefficients: Vec<Rational> = (0..map.global_dim())
            .map(|i| {
                let numer = ((i as i64).wrapping_mul(2654435761) % 97) - 48;
                ratio(numer, 1 + (i as i64 % 7))
            })
            .collect();
        let report = continuity_check(&mesh, &spec, &coefficients, JumpOrderPolicy::ElementSmoothness)?;
        let pass = report.all_zero();
        all_pass &= pass;
        checks.push(serde_json::json!({
            "name": "mesh_continuity",
            "pass": pass,
            "global_dimension": map.global_dim(),
            "max_jump": format_rational(&report.max_jump()),
            "faces_checked": report.entries.len(),
        }));
    }

    println!(
        "{}",
        serde_json::to_string_pretty(&serde_json::json!({"pass": all_pass, "checks": checks}))?
    );
    Ok(all_pass)
}

fn cmd_dims(args: DimsArgs) -> Result<bool> {
    let spec = args.element.spec()?;
    let counts: Vec<u64> = if let Some(counts) = args.counts {
        counts
    } else if let Some(path) = &args.mesh {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        Mesh::from_json(&text)?.face_counts()
    } else {
        single_element_counts(spec.n())
    };
    let table = dimension_table(&spec, &counts)?;
    match args.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = table
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "level": r.level,
                        "faces": r.face_count,
                        "per_face": r.per_face,
                        "subtotal": r.subtotal,
                    })
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "rows": rows,
                    "enumerated_total": table.enumerated_total,
                    "formula_total": table.formula_total,
                }))?
            );
        }
        _ => {
            println!("level  faces  per-face  subtotal");
            for row in &table.rows {
                println!(
                    "{:<6} {:<6} {:<9} {}",
                    row.level, row.face_count, row.per_face, row.subtotal
                );
            }
            println!("enumerated total: {}", table.enumerated_total);
            match table.formula_total {
                Some(value) => println!("formula total:    {value}"),
                None => println!("formula total:    (no closed form for this family)"),
            }
        }
    }
    let consistent = table.formula_total.is_none_or(|f| f == table.enumerated_total);
    if !consistent {
        eprintln!("formula and enumeration disagree");
    }
    Ok(consistent)
}
