use super::{CoxeterVector, Diagram, DiagramError, Weight};

fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Order of the finite Coxeter group of an elliptic diagram.
pub fn elliptic_order(v: &CoxeterVector) -> Result<u64, DiagramError> {
    let d = Diagram::from_vector(v);
    subset_order(&d, d.full())
}

/// Order of the group generated by the reflections in `mask`, which must be elliptic.
pub(crate) fn subset_order(d: &Diagram, mask: u32) -> Result<u64, DiagramError> {
    if !d.is_elliptic(mask) {
        return Err(DiagramError::NotElliptic);
    }
    d.components(mask)
        .into_iter()
        .map(|c| component_order(d, c))
        .product()
}

fn component_order(d: &Diagram, comp: u32) -> Result<u64, DiagramError> {
    let nodes: Vec<usize> = (0..d.nodes()).filter(|i| comp & (1 << i) != 0).collect();
    let n = nodes.len();
    let describe = || {
        let sub = CoxeterVector::new(n, {
            let mut e = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    e.push(d.weight(nodes[a], nodes[b]));
                }
            }
            e
        })
        .unwrap();
        DiagramError::UnknownComponent(sub.to_string())
    };
    match n {
        1 => return Ok(2),
        2 => {
            return match d.weight(nodes[0], nodes[1]) {
                Weight::Angle(k) => Ok(2 * k as u64),
                _ => Err(describe()),
            }
        }
        _ => {}
    }

    // Connected elliptic diagrams on three or more nodes are trees.
    let mut degree = vec![0usize; n];
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let w = d.weight(nodes[a], nodes[b]);
            if w.is_edge() {
                let Weight::Angle(k) = w else {
                    return Err(describe());
                };
                degree[a] += 1;
                degree[b] += 1;
                edges.push((a, b, k));
            }
        }
    }
    if edges.len() != n - 1 {
        return Err(describe());
    }
    let heavy: Vec<&(usize, usize, u32)> = edges.iter().filter(|e| e.2 != 3).collect();
    let max_deg = *degree.iter().max().unwrap();
    let nn = n as u64;

    if max_deg == 3 {
        if !heavy.is_empty() {
            return Err(describe());
        }
        let center = degree.iter().position(|&x| x == 3).unwrap();
        let mut arms: Vec<usize> = edges
            .iter()
            .filter_map(|&(a, b, _)| {
                if a == center {
                    Some(b)
                } else if b == center {
                    Some(a)
                } else {
                    None
                }
            })
            .map(|start| arm_length(&edges, center, start))
            .collect();
        arms.sort_unstable();
        return match arms.as_slice() {
            [1, 1, _] => Ok((1u64 << (nn - 1)) * factorial(nn)),
            [1, 2, 2] => Ok(51_840),
            [1, 2, 3] => Ok(2_903_040),
            [1, 2, 4] => Ok(696_729_600),
            _ => Err(describe()),
        };
    }
    if max_deg > 3 {
        return Err(describe());
    }

    // A path.
    match heavy.as_slice() {
        [] => Ok(factorial(nn + 1)),
        [&(a, b, k)] => {
            let at_end = degree[a] == 1 || degree[b] == 1;
            match (k, at_end, n) {
                (4, true, _) => Ok((1u64 << nn) * factorial(nn)),
                (4, false, 4) => Ok(1152),
                (5, true, 3) => Ok(120),
                (5, true, 4) => Ok(14_400),
                _ => Err(describe()),
            }
        }
        _ => Err(describe()),
    }
}

/// Number of nodes on the arm leaving `center` through `start`.
fn arm_length(edges: &[(usize, usize, u32)], center: usize, start: usize) -> usize {
    let mut prev = center;
    let mut cur = start;
    let mut len = 1;
    loop {
        let next = edges.iter().find_map(|&(a, b, _)| {
            if a == cur && b != prev {
                Some(b)
            } else if b == cur && a != prev {
                Some(a)
            } else {
                None
            }
        });
        match next {
            Some(nx) => {
                prev = cur;
                cur = nx;
                len += 1;
            }
            None => return len,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> u64 {
        elliptic_order(&CoxeterVector::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn catalog() {
        assert_eq!(elliptic_order(&CoxeterVector::right_angled(1)).unwrap(), 2);
        assert_eq!(ord("7"), 14);
        assert_eq!(ord("3"), 6);
        assert_eq!(ord("5,2,2,3,2,3"), 14_400);
        assert_eq!(ord("3,2,2,3,2,3"), 120);
        assert_eq!(ord("4,2,2,3,2,3"), 384);
        assert_eq!(ord("3,2,2,4,2,3"), 1152);
        assert_eq!(ord("5,2,3"), 120);
        // D4: center 0 joined to 1, 2, 3.
        assert_eq!(ord("3,3,3,2,2,2"), 192);
        assert_eq!(ord("2,2,2"), 8);
        assert_eq!(ord("3,2,2"), 12);
    }

    #[test]
    fn e6_and_d5() {
        // E6: path 0-1-2-3-4 with 5 attached to 2.
        let mut v = CoxeterVector::right_angled(6);
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)] {
            v.set(a, b, Weight::Angle(3));
        }
        assert_eq!(elliptic_order(&v).unwrap(), 51_840);
        let mut d5 = CoxeterVector::right_angled(5);
        for (a, b) in [(0, 1), (1, 2), (2, 3), (2, 4)] {
            d5.set(a, b, Weight::Angle(3));
        }
        assert_eq!(elliptic_order(&d5).unwrap(), 1920);
    }

    #[test]
    fn non_elliptic_errors() {
        assert!(elliptic_order(&CoxeterVector::parse("3,3,3").unwrap()).is_err());
    }
}
