//! DOT and SVG text for forests, cell posets and subdivisions of the slice.

use std::fmt::Write;

use num_traits::ToPrimitive;
use tropfm_core::{ConeComplex, Rat};
use tropfm_degen::{DegenError, SimplexLatticeSubdivision};
use tropfm_fm::{ForestBase, PlantedForestType};

pub fn forest_dot<B: ForestBase>(f: &PlantedForestType<B>, name: &str) -> String {
    f.to_dot(name)
}

/// Hasse diagram of the face poset, faces below.
pub fn poset_dot(c: &ConeComplex, name: &str) -> String {
    let mut s = format!("digraph \"{name}\" {{\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, cell) in c.cells.iter().enumerate() {
        let label = if cell.label.is_empty() { i.to_string() } else { format!("{i}\\n{}", cell.label) };
        writeln!(s, "  c{i} [label=\"{label}\", dim={}];", cell.dim).unwrap();
    }
    for (a, b) in c.covering_pairs() {
        writeln!(s, "  c{a} -> c{b};").unwrap();
    }
    s.push_str("}\n");
    s
}

const SIZE: f64 = 400.0;
const PAD: f64 = 40.0;

fn f(x: &Rat) -> f64 {
    x.to_f64().expect("finite")
}

/// Drawing position of a point of `Δ_t`: the segment is horizontal, the
/// triangle has `e_1` on top.
fn place(x: &[Rat], t: &Rat) -> (f64, f64) {
    let t = f(t);
    match x.len() {
        2 => (PAD + SIZE * f(&x[1]) / t, PAD + SIZE / 4.0),
        _ => {
            let corners = [(PAD + SIZE / 2.0, PAD), (PAD, PAD + SIZE * 0.866), (PAD + SIZE, PAD + SIZE * 0.866)];
            let mut p = (0.0, 0.0);
            for (xj, c) in x.iter().zip(corners) {
                let w = f(xj) / t;
                p.0 += w * c.0;
                p.1 += w * c.1;
            }
            p
        }
    }
}

/// SVG of `𝒮`: maximal cells as polygons (or segments for `r = 2`), each
/// vertex labelled with its index and the points marked there.
pub fn subdivision_svg(s: &SimplexLatticeSubdivision) -> Result<String, DegenError> {
    if s.r > 3 {
        return Err(DegenError::UnsupportedDim(s.r));
    }
    let pos: Vec<(f64, f64)> = s.vertices.iter().map(|v| place(v, &s.t)).collect();
    let height = if s.r == 2 { SIZE / 2.0 } else { SIZE * 0.866 + 2.0 * PAD };
    let mut out = format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0}\" height=\"{:.0}\">\n",
        SIZE + 2.0 * PAD,
        height
    );
    for c in s.maximal_cells() {
        let vs = &s.cells[c].vertices;
        if s.r == 2 {
            let (a, b) = (pos[vs[0]], pos[vs[1]]);
            writeln!(out, "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"black\" stroke-width=\"2\"/>", a.0, a.1, b.0, b.1).unwrap();
            continue;
        }
        let cx = vs.iter().map(|&v| pos[v].0).sum::<f64>() / vs.len() as f64;
        let cy = vs.iter().map(|&v| pos[v].1).sum::<f64>() / vs.len() as f64;
        let mut order = vs.clone();
        order.sort_by(|&a, &b| {
            let ta = (pos[a].1 - cy).atan2(pos[a].0 - cx);
            let tb = (pos[b].1 - cy).atan2(pos[b].0 - cx);
            ta.total_cmp(&tb)
        });
        let pts: Vec<String> = order.iter().map(|&v| format!("{:.3},{:.3}", pos[v].0, pos[v].1)).collect();
        writeln!(out, "  <polygon points=\"{}\" fill=\"#eef\" stroke=\"black\" stroke-width=\"1.5\"/>", pts.join(" ")).unwrap();
    }
    for (v, p) in pos.iter().enumerate() {
        let marks = s.labels_at(v);
        let mut label = format!("v{v}");
        if !marks.is_empty() {
            let m: Vec<String> = marks.iter().map(|i| i.to_string()).collect();
            write!(label, " [{}]", m.join(",")).unwrap();
        }
        let fill = if marks.is_empty() { "white" } else { "black" };
        writeln!(out, "  <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"4\" fill=\"{fill}\" stroke=\"black\"/>", p.0, p.1).unwrap();
        writeln!(out, "  <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\">{label}</text>", p.0 + 6.0, p.1 - 6.0).unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tropfm_core::rat::rat;
    use tropfm_degen::simplex_subdiv_from_points;
    use tropfm_fm::RootedTree;
    use tropfm_grid::{grid_comb_type, tropicalise, TropFan};

    #[test]
    fn tree_with_two_legs() {
        let fan = TropFan::full(1);
        let u = tropicalise(&[vec![rat(1, 1)], vec![rat(1, 1)]], &fan).unwrap();
        let base = grid_comb_type(&u);
        let mut t = RootedTree::root(Vec::new());
        t.add_child(0, vec![1, 2]);
        let f = PlantedForestType::new(base, [(1, t)].into_iter().collect()).unwrap();
        let dot = forest_dot(&f, "t");
        let nodes = dot.lines().filter(|l| l.contains("[shape=box") || l.contains("[shape=circle")).count();
        let edges = dot.lines().filter(|l| l.contains(" -- v")).count();
        let legs = dot.lines().filter(|l| l.contains("shape=plaintext")).count();
        assert_eq!((nodes, edges, legs), (2, 1, 2));
    }

    #[test]
    fn triangle_svgs() {
        let one = Rat::from_integer(1.into());
        let corner = vec![vec![rat(1, 1), rat(0, 1), rat(0, 1)]];
        let s = subdivision_svg(&simplex_subdiv_from_points(&corner, &one).unwrap()).unwrap();
        assert_eq!(s.matches("<polygon").count(), 1);
        assert_eq!(s.matches("<text").count(), 3);

        let mids = vec![
            vec![rat(1, 2), rat(1, 2), rat(0, 1)],
            vec![rat(0, 1), rat(1, 2), rat(1, 2)],
            vec![rat(1, 2), rat(0, 1), rat(1, 2)],
        ];
        let s = subdivision_svg(&simplex_subdiv_from_points(&mids, &one).unwrap()).unwrap();
        assert_eq!(s.matches("<polygon").count(), 4);
    }

    #[test]
    fn four_coordinates_rejected() {
        let p = vec![vec![rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]];
        let s = simplex_subdiv_from_points(&p, &Rat::from_integer(1.into())).unwrap();
        assert_eq!(subdivision_svg(&s), Err(DegenError::UnsupportedDim(4)));
    }
}
