//! Connected components of the transition graph `u -> D(u)`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write;

use crate::dynamics::{cycle_info, ducci_step, step_in_place};
use crate::error::{DucciError, Result};
use crate::ring::{RingParams, Tuple};

pub const DEFAULT_MAX_NODES: usize = 1_000_000;

/// The component `S(u)`: its cycle plus every tuple that eventually reaches it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentGraph {
    pub params: RingParams,
    pub nodes: BTreeSet<Tuple>,
    /// `(u, D(u))` for every node, sorted by source.
    pub edges: Vec<(Tuple, Tuple)>,
    /// Cycle in orbit order, starting at the cycle entry of the seed tuple.
    pub cycle_nodes: Vec<Tuple>,
    /// Largest distance from a node to the cycle.
    pub tail_depth: u64,
}

/// Solves `2t = rhs (mod m)`.
fn halve(rhs: u64, m: u64) -> Vec<u64> {
    if m % 2 == 1 {
        let inv2 = (m + 1) / 2;
        vec![((rhs as u128 * inv2 as u128) % m as u128) as u64]
    } else if rhs % 2 == 0 {
        let half = m / 2;
        let t0 = (rhs / 2) % half;
        vec![t0, t0 + half]
    } else {
        Vec::new()
    }
}

/// Every `x` with `D(x) = v`.
///
/// Fixing `x_1 = t` forces `x_{k+1} = v_k - x_k`; the wrap-around equation
/// `x_n + x_1 = v_n` is then `2t = const` for odd n and a condition free of
/// `t` for even n.
pub fn preimages(v: &Tuple) -> Vec<Tuple> {
    let params = v.params();
    let (n, m) = (params.n(), params.m());
    let sub = |a: u64, b: u64| if a >= b { a - b } else { a + m - b };
    let vs = v.entries();

    // x_k = c_k + sign_k * t, sign_k = (-1)^(k-1)
    let mut c = vec![0u64; n];
    for k in 1..n {
        c[k] = sub(vs[k - 1] as u64, c[k - 1]);
    }
    let last = vs[n - 1] as u64;
    let starts: Vec<u64> = if n % 2 == 1 {
        halve(sub(last, c[n - 1]), m)
    } else if c[n - 1] == last {
        (0..m).collect()
    } else {
        Vec::new()
    };

    starts
        .into_iter()
        .map(|t| {
            let entries = c
                .iter()
                .enumerate()
                .map(|(k, &ck)| {
                    let x = if k % 2 == 0 { (ck + t) % m } else { sub(ck, t) };
                    x as u32
                })
                .collect();
            Tuple::from_raw(params, entries)
        })
        .collect()
}

/// Builds `S(u)` by reverse breadth-first search from its cycle.
pub fn component(u: &Tuple, node_cap: usize) -> Result<ComponentGraph> {
    let params = u.params();
    let info = cycle_info(u)?;
    let mut cycle_nodes = Vec::with_capacity(info.per as usize);
    let mut cur = info.cycle_base.clone();
    for _ in 0..info.per {
        if cycle_nodes.len() >= node_cap {
            return Err(DucciError::NodeCap { cap: node_cap });
        }
        let next = ducci_step(&cur);
        cycle_nodes.push(cur);
        cur = next;
    }

    let mut depth: HashMap<Tuple, u64> = cycle_nodes.iter().map(|t| (t.clone(), 0)).collect();
    let mut queue: VecDeque<Tuple> = cycle_nodes.iter().cloned().collect();
    let mut tail_depth = 0;
    while let Some(node) = queue.pop_front() {
        let d = depth[&node];
        for pre in preimages(&node) {
            if depth.contains_key(&pre) {
                continue;
            }
            if depth.len() >= node_cap {
                return Err(DucciError::NodeCap { cap: node_cap });
            }
            tail_depth = tail_depth.max(d + 1);
            depth.insert(pre.clone(), d + 1);
            queue.push_back(pre);
        }
    }

    let nodes: BTreeSet<Tuple> = depth.into_keys().collect();
    let edges = nodes.iter().map(|x| (x.clone(), ducci_step(x))).collect();
    Ok(ComponentGraph {
        params,
        nodes,
        edges,
        cycle_nodes,
        tail_depth,
    })
}

/// True iff `u` and `v` share a component, i.e. reach the same cycle.
pub fn component_equal(u: &Tuple, v: &Tuple) -> Result<bool> {
    u.params().check_same(&v.params())?;
    let cu = cycle_info(u)?;
    let cv = cycle_info(v)?;
    if cu.per != cv.per {
        return Ok(false);
    }
    let m = u.params().m();
    let mut cur = cu.cycle_base;
    for _ in 0..cu.per {
        if cur == cv.cycle_base {
            return Ok(true);
        }
        step_in_place(cur.entries_mut(), m);
    }
    Ok(false)
}

/// Renders a component as a Graphviz digraph: sorted node declarations,
/// then one `u -> D(u)` line per node.
pub fn to_dot(g: &ComponentGraph) -> String {
    let mut out = String::from("digraph ducci {\n");
    for node in &g.nodes {
        let _ = writeln!(out, "  \"{node}\";");
    }
    for (from, to) in &g.edges {
        let _ = writeln!(out, "  \"{from}\" -> \"{to}\";");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, m: u64) -> RingParams {
        RingParams::new(n, m).unwrap()
    }

    fn t(params: RingParams, s: &str) -> Tuple {
        Tuple::parse(params, s).unwrap()
    }

    fn sorted(mut v: Vec<Tuple>) -> Vec<Tuple> {
        v.sort();
        v
    }

    #[test]
    fn preimage_examples() {
        let z6 = p(3, 6);
        assert_eq!(
            sorted(preimages(&t(z6, "0,1,1"))),
            vec![t(z6, "0,0,1"), t(z6, "3,3,4")]
        );
        assert!(preimages(&t(z6, "0,0,1")).is_empty());
        assert_eq!(
            sorted(preimages(&Tuple::zero(z6))),
            vec![t(z6, "0,0,0"), t(z6, "3,3,3")]
        );
        let z5 = p(4, 5);
        for pre in preimages(&t(z5, "1,2,3,4")) {
            assert_eq!(ducci_step(&pre), t(z5, "1,2,3,4"));
        }
    }

    #[test]
    fn component_examples() {
        let z6 = p(3, 6);
        let g = component(&t(z6, "0,0,1"), DEFAULT_MAX_NODES).unwrap();
        assert_eq!(
            (g.nodes.len(), g.cycle_nodes.len(), g.tail_depth),
            (12, 6, 1)
        );

        let z10 = p(3, 10);
        let g = component(&t(z10, "0,0,1"), DEFAULT_MAX_NODES).unwrap();
        assert_eq!(
            (g.nodes.len(), g.cycle_nodes.len(), g.tail_depth),
            (24, 12, 1)
        );

        let z2 = p(2, 2);
        let g = component(&t(z2, "0,0"), DEFAULT_MAX_NODES).unwrap();
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(g.cycle_nodes, vec![Tuple::zero(z2)]);
        assert_eq!(g.tail_depth, 2);
    }

    #[test]
    fn node_cap() {
        let z10 = p(3, 10);
        assert!(matches!(
            component(&t(z10, "0,0,1"), 10),
            Err(DucciError::NodeCap { cap: 10 })
        ));
    }

    #[test]
    fn component_equality() {
        let z6 = p(3, 6);
        assert!(!component_equal(&t(z6, "0,0,1"), &t(z6, "3,2,5")).unwrap());
        let u = t(z6, "2,5,0");
        assert!(component_equal(&u, &ducci_step(&u)).unwrap());
        let u = t(z6, "1,2,3");
        assert!(component_equal(&u, &crate::dynamics::shift(&u, 1)).unwrap());
    }

    #[test]
    fn dot_output() {
        let z6 = p(3, 6);
        let g = component(&t(z6, "0,0,1"), DEFAULT_MAX_NODES).unwrap();
        let dot = to_dot(&g);
        assert!(dot.starts_with("digraph ducci {\n"));
        assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 12);
        assert_eq!(
            dot.lines()
                .filter(|l| l.ends_with("\";") && !l.contains("->"))
                .count(),
            12
        );
        assert!(dot.contains("  \"0,0,1\" -> \"0,1,1\";\n"));
        assert_eq!(
            dot,
            to_dot(&component(&t(z6, "0,0,1"), DEFAULT_MAX_NODES).unwrap())
        );

        // a lone fixed point: Z_3^1 has D(x) = 2x, so 0 is isolated
        let z3 = p(1, 3);
        let g = component(&Tuple::zero(z3), DEFAULT_MAX_NODES).unwrap();
        assert_eq!(
            to_dot(&g),
            "digraph ducci {\n  \"0\";\n  \"0\" -> \"0\";\n}\n"
        );
    }
}
