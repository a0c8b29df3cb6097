use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use spunnorm::ball::{
    compute_norm_ball, export_off, export_svg, report_json, BallOutcome, Pipeline,
};
use spunnorm::boundary::{
    boundary_classes, ends_embeddable, num_boundary_components, spinning_slopes,
};
use spunnorm::error::Error;
use spunnorm::qcoords::parse_vector_json;
use spunnorm::surface::{analyze, is_embedded, reconstruct};
use spunnorm::tri::{native, snappea, IdealTriangulation};

#[derive(Parser)]
#[command(
    name = "spunnorm",
    about = "Thurston norm balls of cusped 3-manifolds via spun-normal surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print homology and triangulation facts used by the pipeline.
    Info { file: PathBuf },
    /// Compute the Thurston norm unit ball.
    Normball {
        file: PathBuf,
        /// Write the full JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write an OFF polyhedron (3-dimensional balls only).
        #[arg(long)]
        off: Option<PathBuf>,
        /// Write an SVG projection (dimensions 2-4).
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Worker threads for surface annotation.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Enumerate quad transversely oriented normal surfaces.
    Qtons {
        file: PathBuf,
        /// Print only the entry with this index.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Analyze one surface given by a coordinate vector file.
    Surface {
        file: PathBuf,
        /// JSON array of 3t (or 6t with --oriented) integers.
        #[arg(long)]
        vector: PathBuf,
        /// Interpret the vector as transversely oriented coordinates.
        #[arg(long)]
        oriented: bool,
    },
    /// Solve for a generalized angle structure and print it.
    Angles { file: PathBuf },
}

fn load(file: &PathBuf) -> Result<IdealTriangulation, Error> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Error::Other(format!("cannot read {}: {e}", file.display())))?;
    if text.trim_start().starts_with("% Triangulation") {
        snappea::import_snappea(&text)
    } else {
        native::load_native(&text)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Info { file } => {
            let tri = load(&file)?;
            let pipeline = Pipeline::new(tri)?;
            print_info(&pipeline);
            Ok(ExitCode::SUCCESS)
        }
        Command::Normball {
            file,
            json,
            off,
            svg,
            threads,
        } => {
            if let Some(n) = threads {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| Error::Other(format!("thread pool: {e}")))?;
            }
            let tri = load(&file)?;
            let pipeline = Pipeline::new(tri)?;
            let table = pipeline.enumerate_qtons()?;
            let outcome = compute_norm_ball(&pipeline, &table)?;
            let report = report_json(&pipeline, &table, &outcome);
            if let Some(path) = json {
                std::fs::write(&path, &report)
                    .map_err(|e| Error::Other(format!("cannot write {}: {e}", path.display())))?;
            } else {
                println!("{report}");
            }
            match &outcome {
                BallOutcome::Ball(ball) => {
                    for v in &ball.vertices {
                        eprintln!("Vertex: {}", v.description);
                    }
                    for w in &ball.warnings {
                        eprintln!("warning: {w}");
                    }
                    if let Some(path) = off {
                        std::fs::write(&path, export_off(ball)?)
                            .map_err(|e| Error::Other(e.to_string()))?;
                    }
                    if let Some(path) = svg {
                        std::fs::write(&path, export_svg(ball)?)
                            .map_err(|e| Error::Other(e.to_string()))?;
                    }
                    Ok(ExitCode::SUCCESS)
                }
                BallOutcome::UpperBound(ub) => {
                    eprintln!("{}", ub.note);
                    for v in &ub.vertices {
                        eprintln!("Vertex: {}", v.description);
                    }
                    if off.is_some() || svg.is_some() {
                        eprintln!("warning: no polytope exports for the upper-bound branch");
                    }
                    Ok(ExitCode::from(4))
                }
            }
        }
        Command::Qtons { file, index } => {
            let tri = load(&file)?;
            let pipeline = Pipeline::new(tri)?;
            let table = pipeline.enumerate_qtons()?;
            for e in &table.entries {
                if index.is_some_and(|i| i != e.index) {
                    continue;
                }
                let vec: Vec<String> = e.vector.iter().map(|v| v.to_string()).collect();
                println!(
                    "qtons {}: [{}] surface {} chi* {} embedded {} ends_embedded {}",
                    e.index,
                    vec.join(","),
                    e.report.name,
                    e.chi_star,
                    e.embedded,
                    e.ends_embedded
                );
            }
            if let Some(i) = index {
                if table.entries.iter().all(|e| e.index != i) {
                    return Err(Error::Other(format!("no qtons with index {i}")));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Surface {
            file,
            vector,
            oriented,
        } => {
            let tri = load(&file)?;
            let text = std::fs::read_to_string(&vector)
                .map_err(|e| Error::Other(format!("cannot read {}: {e}", vector.display())))?;
            let (x_opt, u) = parse_vector_json(&tri, &text, oriented)?;
            let pipeline = Pipeline::new(tri)?;
            let complex = reconstruct(&pipeline.tri, &pipeline.gas, x_opt.as_ref(), &u)?;
            let report = analyze(&complex);
            let mut out = serde_json::Map::new();
            out.insert("connected".into(), report.connected.into());
            out.insert("orientable".into(), report.orientable.into());
            out.insert("euler".into(), report.euler.into());
            out.insert("boundary".into(), report.boundary.into());
            out.insert("type".into(), report.name.clone().into());
            let spin = spinning_slopes(&pipeline.tri, &u);
            out.insert(
                "spinning_slopes".into(),
                serde_json::to_value(
                    spin.iter()
                        .map(|(a, b)| (a.to_string(), b.to_string()))
                        .collect::<Vec<_>>(),
                )
                .unwrap(),
            );
            match &x_opt {
                Some(x) => {
                    let classes = boundary_classes(&pipeline.tri, x);
                    let slopes = serde_json::json!({
                        "outward": classes.per_cusp.iter()
                            .map(|c| (c.0 .0.to_string(), c.0 .1.to_string()))
                            .collect::<Vec<_>>(),
                        "inward": classes.per_cusp.iter()
                            .map(|c| (c.1 .0.to_string(), c.1 .1.to_string()))
                            .collect::<Vec<_>>(),
                    });
                    out.insert("slopes".into(), slopes);
                    out.insert(
                        "embedded".into(),
                        is_embedded(&pipeline.tri, &pipeline.gas, x)?.into(),
                    );
                    out.insert(
                        "ends_embedded".into(),
                        ends_embeddable(&pipeline.tri, x).into(),
                    );
                    let (_, total) = num_boundary_components(&pipeline.tri, x);
                    out.insert("num_boundary_comps".into(), total.to_string().into());
                }
                None => {
                    out.insert("slopes".into(), serde_json::Value::Null);
                    out.insert("embedded".into(), serde_json::Value::Null);
                    out.insert("ends_embedded".into(), serde_json::Value::Null);
                }
            }
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Angles { file } => {
            let tri = load(&file)?;
            let pipeline = Pipeline::new(tri)?;
            println!("generalized angle structure (units of pi):");
            for tet in 0..pipeline.tri.num_tets() {
                for kind in 0..3u8 {
                    let q = spunnorm::qcoords::QuadType { tet, kind };
                    println!(
                        "  tet {tet} quad {}: {}",
                        kind_name(kind),
                        pipeline.gas.angle(q)
                    );
                }
            }
            println!("holonomy ledger:");
            for (cusp, (m, l)) in pipeline.ledger.per_cusp.iter().enumerate() {
                let tag = if pipeline.tri.bases()[cusp].internal {
                    " (internal basis)"
                } else {
                    ""
                };
                println!("  cusp {cusp}: h(mu) = {m}, h(lambda) = {l}{tag}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn kind_name(kind: u8) -> &'static str {
    match kind {
        0 => "q01|23",
        1 => "q02|13",
        _ => "q03|12",
    }
}

fn print_info(pipeline: &Pipeline) {
    let tri = &pipeline.tri;
    let h = &pipeline.homology;
    println!("tetrahedra: {}", tri.num_tets());
    println!(
        "edge classes: {} (valences {:?})",
        tri.edges().len(),
        tri.edges().iter().map(|e| e.valence()).collect::<Vec<_>>()
    );
    println!("cusps: {}", tri.cusps().len());
    println!("b1 = {}", h.b1);
    println!(
        "torsion: {:?}",
        h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>()
    );
    println!("b2(pair) = {}", h.b2_pair);
    match &h.longitudes {
        Some(lons) => {
            for (cusp, ((p, q), n)) in lons.iter().enumerate() {
                let tag = if tri.bases()[cusp].internal {
                    " (internal basis)"
                } else {
                    ""
                };
                println!("cusp {cusp}: homological longitude ({p}, {q}), order {n}{tag}");
            }
        }
        None => println!("peripheral map unavailable; simplicial map used"),
    }
    println!(
        "homology map: {}",
        if h.peripheral_available {
            "peripheral"
        } else {
            "simplicial"
        }
    );
}
