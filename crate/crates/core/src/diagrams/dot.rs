use std::fmt::Write;

use super::{pairs, CoxeterVector, Weight};

/// Graphviz rendering of a Coxeter diagram.
///
/// Right angles are omitted. Weights 3 to 6 become one to four parallel
/// strokes, larger weights a labeled edge, parallel pairs an edge labeled `0`
/// and divergent pairs a dotted edge, labeled with the length when given.
pub fn export_dot(v: &CoxeterVector, lengths: Option<&[String]>) -> String {
    let mut s = String::new();
    writeln!(s, "graph coxeter {{").unwrap();
    writeln!(s, "  node [shape=circle];").unwrap();
    for i in 0..v.nodes() {
        writeln!(s, "  {i};").unwrap();
    }
    let mut divergent = 0;
    for (i, j) in pairs(v.nodes()) {
        match v.get(i, j) {
            Weight::Angle(2) => {}
            Weight::Angle(k @ 3..=6) => {
                let strokes = k - 2;
                let color = vec!["black"; strokes as usize].join(":invis:");
                writeln!(s, "  {i} -- {j} [color=\"{color}\"];").unwrap();
            }
            Weight::Angle(k) => writeln!(s, "  {i} -- {j} [label=\"{k}\"];").unwrap(),
            Weight::Parallel => writeln!(s, "  {i} -- {j} [label=\"0\", penwidth=2];").unwrap(),
            Weight::Divergent => {
                match lengths.and_then(|l| l.get(divergent)) {
                    Some(len) => {
                        writeln!(s, "  {i} -- {j} [style=dotted, label=\"{len}\"];").unwrap()
                    }
                    None => writeln!(s, "  {i} -- {j} [style=dotted];").unwrap(),
                }
                divergent += 1;
            }
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn right_angled_has_no_edges() {
        let dot = export_dot(&CoxeterVector::right_angled(7), None);
        assert!(!dot.contains("--"));
        assert_eq!(dot.matches(';').count(), 8);
    }

    #[test]
    fn triangle_and_dotted() {
        let dot = export_dot(&CoxeterVector::parse("3,3,3").unwrap(), None);
        assert_eq!(dot.matches("--").count(), 3);
        let v = CoxeterVector::parse("2,2,2,2,inf,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2").unwrap();
        let dot = export_dot(&v, Some(&["1.5".to_string()]));
        assert!(dot.contains("0 -- 5 [style=dotted, label=\"1.5\"]"));
    }
}
