//! Importer for the de facto SnapPea "% Triangulation" text format,
//! including conversion of the stored peripheral-curve intersection
//! numbers into normal curves.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::tri::basis::{crossing_sign, realize_flows};
use crate::tri::{Gluing, IdealTriangulation, PeripheralCurve, Perm};

struct Tokens<'a> {
    toks: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Self {
        let mut toks = Vec::new();
        for (i, line) in text.lines().enumerate() {
            for t in line.split_whitespace() {
                toks.push((i + 1, t));
            }
        }
        Tokens { toks, pos: 0 }
    }

    fn line(&self) -> usize {
        self.toks
            .get(self.pos.min(self.toks.len().saturating_sub(1)))
            .map_or(0, |t| t.0)
    }

    fn next(&mut self, what: &str) -> Result<&'a str> {
        let t = self.toks.get(self.pos).ok_or_else(|| Error::SnapPeaParse {
            line: self.toks.last().map_or(0, |t| t.0),
            msg: format!("unexpected end of file, expected {what}"),
        })?;
        self.pos += 1;
        Ok(t.1)
    }

    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn int(&mut self, what: &str) -> Result<i64> {
        let line = self.line();
        let t = self.next(what)?;
        t.parse().map_err(|_| Error::SnapPeaParse {
            line,
            msg: format!("expected integer {what}, found {t:?}"),
        })
    }

    fn float(&mut self, what: &str) -> Result<f64> {
        let line = self.line();
        let t = self.next(what)?;
        t.parse().map_err(|_| Error::SnapPeaParse {
            line,
            msg: format!("expected number {what}, found {t:?}"),
        })
    }
}

/// Parses a SnapPea triangulation file into an IdealTriangulation with
/// the stored meridian/longitude converted to normal peripheral curves.
pub fn import_snappea(text: &str) -> Result<IdealTriangulation> {
    let mut tk = Tokens::new(text);
    let header = tk.next("header")?;
    let header2 = if header == "%" {
        tk.next("header")?
    } else {
        ""
    };
    if !(header == "% Triangulation" || (header == "%" && header2 == "Triangulation")) {
        return Err(Error::SnapPeaParse {
            line: 1,
            msg: "missing \"% Triangulation\" header".into(),
        });
    }
    let _name = tk.next("manifold name")?;
    let _solution_type = tk.next("solution type")?;
    // Volume follows the solution type in files written by SnapPea.
    if tk.peek().map(|t| t.parse::<f64>().is_ok()) == Some(true) {
        tk.float("volume")?;
    }
    let orientability = tk.next("orientability")?;
    if orientability != "oriented_manifold" {
        return Err(Error::SnapPeaNonOrientable);
    }
    let cs = tk.next("Chern-Simons flag")?;
    if cs == "CS_known" {
        tk.float("Chern-Simons value")?;
    }

    let num_or = tk.int("number of torus cusps")?;
    let num_nonor = tk.int("number of Klein bottle cusps")?;
    if num_nonor != 0 {
        return Err(Error::SnapPeaFilledCusp);
    }
    let num_cusps = num_or as usize;
    for _ in 0..num_cusps {
        let line = tk.line();
        let topology = tk.next("cusp topology")?;
        let m = tk.float("meridian filling")?;
        let l = tk.float("longitude filling")?;
        if topology != "torus" {
            return Err(Error::SnapPeaParse {
                line,
                msg: format!("unsupported cusp topology {topology:?}"),
            });
        }
        if m != 0.0 || l != 0.0 {
            return Err(Error::SnapPeaFilledCusp);
        }
    }

    let t = tk.int("number of tetrahedra")? as usize;
    if t == 0 {
        return Err(Error::EmptyTriangulation);
    }
    let mut gluings: Vec<[Gluing; 4]> = Vec::with_capacity(t);
    let mut cusp_of: Vec<[usize; 4]> = Vec::with_capacity(t);
    // curves[c][tet][v][f] for c in {meridian, longitude}, summed over the
    // two sheets (orientable manifolds use only one).
    let mut curves = [vec![[[0i64; 4]; 4]; t], vec![[[0i64; 4]; 4]; t]];

    for tet in 0..t {
        let mut neighbors = [0usize; 4];
        for n in neighbors.iter_mut() {
            let line = tk.line();
            let v = tk.int("neighbor index")?;
            if v < 0 || v as usize >= t {
                return Err(Error::SnapPeaParse {
                    line,
                    msg: format!("neighbor index {v} out of range"),
                });
            }
            *n = v as usize;
        }
        let mut perms = [Perm::identity(); 4];
        for p in perms.iter_mut() {
            let line = tk.line();
            let s = tk.next("gluing permutation")?;
            let digits: Vec<u8> = s.bytes().map(|b| b.wrapping_sub(b'0')).collect();
            if digits.len() != 4 || digits.iter().any(|&d| d > 3) {
                return Err(Error::SnapPeaParse {
                    line,
                    msg: format!("bad gluing permutation {s:?}"),
                });
            }
            *p = Perm([digits[0], digits[1], digits[2], digits[3]]);
            if !p.is_valid() {
                return Err(Error::SnapPeaParse {
                    line,
                    msg: format!("gluing {s:?} is not a permutation"),
                });
            }
        }
        let mut faces = [Gluing {
            tet: 0,
            perm: Perm::identity(),
        }; 4];
        for f in 0..4 {
            faces[f] = Gluing {
                tet: neighbors[f],
                perm: perms[f],
            };
        }
        gluings.push(faces);

        let mut cusp_idx = [0usize; 4];
        for c in cusp_idx.iter_mut() {
            let line = tk.line();
            let v = tk.int("cusp index")?;
            if v < 0 || v as usize >= num_cusps {
                return Err(Error::SnapPeaParse {
                    line,
                    msg: format!("cusp index {v} out of range"),
                });
            }
            *c = v as usize;
        }
        cusp_of.push(cusp_idx);

        // Four rows of 16: (meridian, longitude) x (right, left) sheets.
        for row in 0..4 {
            for v in 0..4 {
                for f in 0..4 {
                    let val = tk.int("peripheral curve entry")?;
                    curves[row / 2][tet][v][f] += val;
                }
            }
        }
        // Filled shape (two doubles); tolerate absence at end of file.
        if tk.peek().map(|s| s.parse::<f64>().is_ok()) == Some(true) {
            tk.float("shape (real part)")?;
            tk.float("shape (imaginary part)")?;
        }
    }

    // Build once without peripheral data to get the combinatorics, then
    // convert the curve intersection numbers into flows per side class.
    let bare = IdealTriangulation::new_with_labels(t, gluings.clone(), Vec::new(), Some(&cusp_of))?;
    if bare.cusps().len() != num_cusps {
        return Err(Error::SnapPeaParse {
            line: 0,
            msg: format!(
                "file declares {num_cusps} cusps but the triangulation has {}",
                bare.cusps().len()
            ),
        });
    }

    let mut peripheral = Vec::new();
    for cusp in 0..num_cusps {
        let mut curve_pair: Vec<PeripheralCurve> = Vec::new();
        for data in curves.iter() {
            let mut flow: BTreeMap<usize, i64> = BTreeMap::new();
            for (tet, per_tet) in data.iter().enumerate() {
                for v in 0..4u8 {
                    if bare.cusp_of(tet, v) != cusp {
                        continue;
                    }
                    for f in 0..4u8 {
                        if f == v {
                            continue;
                        }
                        let n = per_tet[v as usize][f as usize];
                        if n == 0 {
                            continue;
                        }
                        let class = bare.side_class((tet, v, f));
                        let theta = crossing_sign(&bare, tet, v, f, true) as i64 * n;
                        match flow.get(&class) {
                            None => {
                                flow.insert(class, theta);
                            }
                            Some(&old) if old == theta => {}
                            Some(&old) => {
                                return Err(Error::SnapPeaParse {
                                    line: 0,
                                    msg: format!(
                                        "inconsistent peripheral data on cusp {cusp}: {old} vs {theta}"
                                    ),
                                });
                            }
                        }
                    }
                }
            }
            let comps = realize_flows(&bare, cusp, &flow).map_err(|e| Error::SnapPeaParse {
                line: 0,
                msg: format!("peripheral curve on cusp {cusp}: {e}"),
            })?;
            if comps.len() != 1 {
                return Err(Error::SnapPeaParse {
                    line: 0,
                    msg: format!(
                        "peripheral curve on cusp {cusp} has {} components",
                        comps.len()
                    ),
                });
            }
            curve_pair.push(PeripheralCurve {
                cusp,
                steps: comps.into_iter().next().unwrap(),
            });
        }
        let longitude = curve_pair.pop().unwrap();
        let meridian = curve_pair.pop().unwrap();
        peripheral.push((cusp, meridian, longitude));
    }

    IdealTriangulation::new_with_labels(t, gluings, peripheral, Some(&cusp_of))
}

/// Writes a triangulation in SnapPea format; used to produce fixture
/// files and for interchange with other tools.
pub fn export_snappea(tri: &IdealTriangulation, name: &str) -> String {
    let mut out = String::new();
    out.push_str("% Triangulation\n");
    out.push_str(name);
    out.push('\n');
    out.push_str("not_attempted 0.0\n");
    out.push_str("oriented_manifold\n");
    out.push_str("CS_unknown\n\n");
    out.push_str(&format!("{} 0\n", tri.cusps().len()));
    for _ in tri.cusps() {
        out.push_str("    torus   0.000000000000   0.000000000000\n");
    }
    out.push('\n');
    out.push_str(&format!("{}\n", tri.num_tets()));
    for tet in 0..tri.num_tets() {
        let g = &tri.gluings()[tet];
        out.push_str(&format!(
            "  {:>4} {:>4} {:>4} {:>4}\n",
            g[0].tet, g[1].tet, g[2].tet, g[3].tet
        ));
        out.push_str(&format!(
            " {} {} {} {}\n",
            perm_str(g[0].perm),
            perm_str(g[1].perm),
            perm_str(g[2].perm),
            perm_str(g[3].perm)
        ));
        out.push_str(&format!(
            "  {:>3} {:>3} {:>3} {:>3}\n",
            tri.cusp_of(tet, 0),
            tri.cusp_of(tet, 1),
            tri.cusp_of(tet, 2),
            tri.cusp_of(tet, 3)
        ));
        // Peripheral rows: (meridian, longitude) x (right, left); we store
        // everything on the right-handed sheet.
        for c in 0..2 {
            for sheet in 0..2 {
                let mut row = Vec::with_capacity(16);
                for v in 0..4u8 {
                    for f in 0..4u8 {
                        if sheet == 1 || f == v {
                            row.push(0);
                            continue;
                        }
                        let cusp = tri.cusp_of(tet, v);
                        let basis = &tri.bases()[cusp];
                        let curve = if c == 0 { &basis.mu } else { &basis.lambda };
                        let flow = crate::tri::basis::flows(tri, curve);
                        let class = tri.side_class((tet, v, f));
                        let theta = flow.get(&class).copied().unwrap_or(0);
                        // n(v, f) = inflow = theta * crossing sign.
                        let e = crossing_sign(tri, tet, v, f, true) as i64;
                        row.push(theta * e);
                    }
                }
                out.push_str(&format!(
                    "{}\n",
                    row.iter()
                        .map(|x| format!("{x:>3}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                ));
            }
        }
        out.push_str("  0.0 0.0\n\n");
    }
    out
}

fn perm_str(p: Perm) -> String {
    p.0.iter().map(|d| d.to_string()).collect()
}
