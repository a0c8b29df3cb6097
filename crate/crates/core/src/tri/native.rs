//! The `tnorm-tri/1` native JSON triangulation format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tri::{CurveStep, Gluing, IdealTriangulation, PeripheralCurve, Perm};

pub const FORMAT: &str = "tnorm-tri/1";

#[derive(Serialize, Deserialize)]
struct FileGluing {
    tet: usize,
    perm: [u8; 4],
}

#[derive(Serialize, Deserialize)]
struct FileCurves {
    cusp: usize,
    meridian: Vec<CurveStep>,
    longitude: Vec<CurveStep>,
}

#[derive(Serialize, Deserialize)]
struct FileTri {
    format: String,
    num_tetrahedra: usize,
    gluings: Vec<Vec<FileGluing>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    peripheral_curves: Option<Vec<FileCurves>>,
}

/// Parses and validates a `tnorm-tri/1` file.
pub fn load_native(text: &str) -> Result<IdealTriangulation> {
    let file: FileTri = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    if file.format != FORMAT {
        return Err(Error::UnsupportedFormat(file.format));
    }
    if file.gluings.len() != file.num_tetrahedra {
        return Err(Error::Json(format!(
            "expected {} gluing rows, found {}",
            file.num_tetrahedra,
            file.gluings.len()
        )));
    }
    let mut gluings = Vec::with_capacity(file.num_tetrahedra);
    for (tet, row) in file.gluings.iter().enumerate() {
        if row.len() != 4 {
            return Err(Error::Json(format!(
                "tetrahedron {tet}: expected 4 face gluings, found {}",
                row.len()
            )));
        }
        let mut faces = [Gluing {
            tet: 0,
            perm: Perm::identity(),
        }; 4];
        for (f, g) in row.iter().enumerate() {
            faces[f] = Gluing {
                tet: g.tet,
                perm: Perm(g.perm),
            };
        }
        gluings.push(faces);
    }
    let peripheral = file
        .peripheral_curves
        .unwrap_or_default()
        .into_iter()
        .map(|c| {
            (
                c.cusp,
                PeripheralCurve {
                    cusp: c.cusp,
                    steps: c.meridian,
                },
                PeripheralCurve {
                    cusp: c.cusp,
                    steps: c.longitude,
                },
            )
        })
        .collect();
    IdealTriangulation::new(file.num_tetrahedra, gluings, peripheral)
}

/// Serializes a triangulation back to `tnorm-tri/1`. Derived internal
/// bases are not written, so a round trip reproduces the input exactly.
pub fn serialize(tri: &IdealTriangulation) -> String {
    let gluings = tri
        .gluings()
        .iter()
        .map(|faces| {
            faces
                .iter()
                .map(|g| FileGluing {
                    tet: g.tet,
                    perm: g.perm.0,
                })
                .collect()
        })
        .collect();
    let curves: Vec<FileCurves> = tri
        .bases()
        .iter()
        .enumerate()
        .filter(|(_, b)| !b.internal)
        .map(|(cusp, b)| FileCurves {
            cusp,
            meridian: b.mu.steps.clone(),
            longitude: b.lambda.steps.clone(),
        })
        .collect();
    let file = FileTri {
        format: FORMAT.to_string(),
        num_tetrahedra: tri.num_tets(),
        gluings,
        peripheral_curves: if curves.is_empty() {
            None
        } else {
            Some(curves)
        },
    };
    serde_json::to_string_pretty(&file).expect("serialization cannot fail")
}
