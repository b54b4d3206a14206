//! Truncated growth graphs on the spherical spectrum.
//!
//! A vertex is a spectrum index `γ` with every coordinate at most the cutoff.
//! A generator `r` with shift `s` produces the edge `γ → γ + s` whenever
//! `‖b^γ‖ / ‖b^(γ+s)‖ < c`. The length function is the BFS distance from
//! the root counted in edges, except that the root itself has length 1.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::{LogNormTable, MonomialExponents, NormKind};
use crate::spectrum::{Family, SpectrumIndex, SphereFamily};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Generator {
    pub name: String,
    pub shift: SpectrumIndex,
    pub monomial: MonomialExponents,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSet {
    generators: Vec<Generator>,
}

impl GeneratorSet {
    pub fn new(fam: &SphereFamily, generators: Vec<Generator>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument("empty generator set".into()));
        }
        for g in &generators {
            fam.check_index(&g.shift)?;
            if g.shift.coord_sum() == 0 {
                return Err(Error::InvalidArgument(format!("generator {} has zero shift", g.name)));
            }
        }
        Ok(GeneratorSet { generators })
    }

    /// `{y, z, yz}` for odd-A, `{y²}` for even-B, `{y}` for odd-D.
    pub fn default_for(fam: &SphereFamily) -> Self {
        let g = |name: &str, shift, a, b| Generator {
            name: name.to_string(),
            shift,
            monomial: MonomialExponents::new(a, b),
        };
        let generators = match fam.family {
            Family::OddA => vec![
                g("y", SpectrumIndex::Pair(1, 0), 1, 0),
                g("z", SpectrumIndex::Pair(0, 1), 0, 1),
                g("yz", SpectrumIndex::Pair(1, 1), 1, 1),
            ],
            Family::EvenB => vec![g("y^2", SpectrumIndex::Single(1), 2, 0)],
            Family::OddD => vec![g("y", SpectrumIndex::Single(1), 1, 0)],
        };
        GeneratorSet { generators }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }
}

/// Default edge bound: just above the largest norm ratio met along the
/// paths that make the family's root reach everything.
///
/// Sup norms: 2.1 for odd-A (diagonal ratio 2), 1.1 otherwise (ratio 1).
/// L² norms: the maximum ratio over those path edges within the cutoff, plus 0.1.
pub fn default_c(fam: &SphereFamily, norm: NormKind, cutoff: u64) -> f64 {
    match (norm, fam.family) {
        (NormKind::Sup, Family::OddA) => 2.1,
        (NormKind::Sup, _) => 1.1,
        (NormKind::L2, _) => max_path_edge_ratio(fam, norm, cutoff) + 0.1,
    }
}

/// Edges used by the explicit paths from the root: along the diagonal by
/// `yz`, then away from it by `y` (below the diagonal) or `z` (above).
pub fn is_path_edge(from: &SpectrumIndex, to: &SpectrumIndex) -> bool {
    match (*from, *to) {
        (SpectrumIndex::Pair(a, b), SpectrumIndex::Pair(c, d)) => {
            (a == b && c == a + 1 && d == b + 1)
                || (a >= b && c == a + 1 && d == b)
                || (b >= a && c == a && d == b + 1)
        }
        (SpectrumIndex::Single(a), SpectrumIndex::Single(c)) => c == a + 1,
        _ => false,
    }
}

fn max_path_edge_ratio(fam: &SphereFamily, norm: NormKind, cutoff: u64) -> f64 {
    let table = LogNormTable::new(*fam, norm, cutoff);
    let gens = GeneratorSet::default_for(fam);
    let mut best = f64::NEG_INFINITY;
    for v in truncated_vertices(fam, cutoff) {
        for g in gens.generators() {
            let w = v.checked_add(&g.shift).expect("arity matches");
            if w.max_coord() <= cutoff && is_path_edge(&v, &w) {
                best = best.max(table.ratio(&v, &w));
            }
        }
    }
    best
}

fn truncated_vertices(fam: &SphereFamily, cutoff: u64) -> Vec<SpectrumIndex> {
    match fam.family {
        Family::OddA => (0..=cutoff)
            .flat_map(|a| (0..=cutoff).map(move |b| SpectrumIndex::Pair(a, b)))
            .collect(),
        _ => (0..=cutoff).map(SpectrumIndex::Single).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub generator: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct GrowthGraph {
    pub fam: SphereFamily,
    pub cutoff: u64,
    pub c: f64,
    pub norm: NormKind,
    pub generators: GeneratorSet,
    vertices: Vec<SpectrumIndex>,
    /// Some generator shift leaves the truncation.
    boundary: Vec<bool>,
    edges: Vec<Edge>,
    out_edges: Vec<Vec<usize>>,
}

/// Builds the truncated graph. Edge order is by source vertex, then generator.
pub fn build_graph(
    fam: &SphereFamily,
    generators: &GeneratorSet,
    c: f64,
    cutoff: u64,
    norm: NormKind,
) -> Result<GrowthGraph> {
    if c.is_nan() || c <= 0.0 {
        return Err(Error::InvalidArgument(format!("c must be positive, got {c}")));
    }
    if cutoff < 1 {
        return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
    }
    let vertices = truncated_vertices(fam, cutoff);
    let table = LogNormTable::new(*fam, norm, cutoff);
    let width = cutoff as usize + 1;
    let position = |v: &SpectrumIndex| match *v {
        SpectrumIndex::Pair(a, b) => a as usize * width + b as usize,
        SpectrumIndex::Single(a) => a as usize,
    };

    let per_vertex: Vec<(bool, Vec<Edge>)> = vertices
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            let mut boundary = false;
            let mut out = Vec::new();
            for (gi, g) in generators.generators().iter().enumerate() {
                let w = v.checked_add(&g.shift).expect("arity validated");
                if w.max_coord() > cutoff {
                    boundary = true;
                    continue;
                }
                let ratio = table.ratio(v, &w);
                if ratio < c {
                    out.push(Edge { from: i, to: position(&w), generator: gi, ratio });
                }
            }
            (boundary, out)
        })
        .collect();

    let mut boundary = Vec::with_capacity(vertices.len());
    let mut edges = Vec::new();
    let mut out_edges = vec![Vec::new(); vertices.len()];
    for (i, (b, out)) in per_vertex.into_iter().enumerate() {
        boundary.push(b);
        for e in out {
            out_edges[i].push(edges.len());
            edges.push(e);
        }
    }
    Ok(GrowthGraph {
        fam: *fam,
        cutoff,
        c,
        norm,
        generators: generators.clone(),
        vertices,
        boundary,
        edges,
        out_edges,
    })
}

/// Graph with the family's default generators and default `c`.
pub fn default_graph(fam: &SphereFamily, cutoff: u64, norm: NormKind) -> Result<GrowthGraph> {
    let c = default_c(fam, norm, cutoff);
    build_graph(fam, &GeneratorSet::default_for(fam), c, cutoff, norm)
}

impl GrowthGraph {
    pub fn vertices(&self) -> &[SpectrumIndex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn vertex_position(&self, v: &SpectrumIndex) -> Option<usize> {
        if self.fam.check_index(v).is_err() || v.max_coord() > self.cutoff {
            return None;
        }
        Some(match *v {
            SpectrumIndex::Pair(a, b) => a as usize * (self.cutoff as usize + 1) + b as usize,
            SpectrumIndex::Single(a) => a as usize,
        })
    }

    pub fn has_edge(&self, from: &SpectrumIndex, to: &SpectrumIndex) -> bool {
        match (self.vertex_position(from), self.vertex_position(to)) {
            (Some(f), Some(t)) => self.out_edges[f].iter().any(|&e| self.edges[e].to == t),
            _ => false,
        }
    }

    /// Directed edges as index pairs, in construction order.
    pub fn edge_pairs(&self) -> Vec<(SpectrumIndex, SpectrumIndex)> {
        self.edges.iter().map(|e| (self.vertices[e.from], self.vertices[e.to])).collect()
    }

    fn bfs(&self, start: usize) -> Vec<Option<u64>> {
        let mut dist = vec![None; self.vertices.len()];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued vertices are reached");
            for &e in &self.out_edges[u] {
                let t = self.edges[e].to;
                if dist[t].is_none() {
                    dist[t] = Some(d + 1);
                    queue.push_back(t);
                }
            }
        }
        // the root has length 1, like its out-neighbours
        dist.iter().map(|d| d.map(|d| d.max(1))).collect()
    }

    fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.to] += 1;
        }
        deg
    }

    /// Edges strictly increase the coordinate sum, so the graph is a DAG.
    pub fn is_acyclic(&self) -> bool {
        self.edges
            .iter()
            .all(|e| self.vertices[e.to].coord_sum() > self.vertices[e.from].coord_sum())
    }
}

/// The vertex from which every truncated vertex is reachable, if any.
///
/// In a DAG such a vertex has in-degree 0 and is the only one, so the
/// candidate is found from in-degrees and then confirmed by BFS.
pub fn find_root(g: &GrowthGraph) -> Option<SpectrumIndex> {
    let sources: Vec<usize> = g
        .in_degrees()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 0)
        .map(|(i, _)| i)
        .collect();
    match sources.as_slice() {
        [only] if g.bfs(*only).iter().all(Option::is_some) => Some(g.vertices[*only]),
        _ => None,
    }
}

/// Shortest-path length from `root`, with `ℓ(root) = 1`.
pub fn length_function(g: &GrowthGraph, root: &SpectrumIndex) -> Result<BTreeMap<SpectrumIndex, u64>> {
    let start = g
        .vertex_position(root)
        .ok_or_else(|| Error::NotARoot(format!("{root} is not a vertex")))?;
    let dist = g.bfs(start);
    let mut out = BTreeMap::new();
    for (v, d) in g.vertices.iter().zip(dist) {
        match d {
            Some(d) => out.insert(*v, d),
            None => return Err(Error::NotARoot(format!("{v} is unreachable from {root}"))),
        };
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub vertex: SpectrumIndex,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiracGrowthReport {
    /// `Δ = max |d(γ') − d(γ)|` over the edges considered.
    pub max_edge_increment: f64,
    /// `|d(root)|`
    pub bound_constant: f64,
    /// Only edges whose source has `ℓ ≤ window` enter `Δ`; `None` means all.
    pub window: Option<u64>,
    pub violations: Vec<Violation>,
}

impl DiracGrowthReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `|d(γ)| ≤ |d(root)| + Δ ℓ(γ)` on every vertex.
///
/// With the full window this holds by telescoping along a shortest path;
/// restricting `Δ` to a window near the root is what exposes growth that
/// is not controlled by `ℓ`.
pub fn dirac_growth_check<F>(g: &GrowthGraph, root: &SpectrumIndex, d: F, window: Option<u64>) -> Result<DiracGrowthReport>
where
    F: Fn(&SpectrumIndex) -> f64,
{
    let lengths = length_function(g, root)?;
    let values: Vec<f64> = g.vertices.iter().map(&d).collect();
    let max_edge_increment = g
        .edges
        .iter()
        .filter(|e| window.is_none_or(|w| lengths[&g.vertices[e.from]] <= w))
        .map(|e| (values[e.to] - values[e.from]).abs())
        .fold(0.0, f64::max);
    let bound_constant = d(root).abs();
    let violations = g
        .vertices
        .iter()
        .zip(&values)
        .filter_map(|(v, &value)| {
            let bound = bound_constant + max_edge_increment * lengths[v] as f64;
            (value.abs() > bound * (1.0 + 1e-12) + 1e-12).then_some(Violation { vertex: *v, value, bound })
        })
        .collect();
    Ok(DiracGrowthReport { max_edge_increment, bound_constant, window, violations })
}

#[derive(Serialize)]
struct GraphJson<'a> {
    schema_version: u32,
    family: Family,
    n: usize,
    cutoff: u64,
    c: f64,
    norm: NormKind,
    root: Option<String>,
    generators: Vec<&'a str>,
    vertices: Vec<VertexJson>,
    edges: Vec<EdgeJson<'a>>,
}

#[derive(Serialize)]
struct VertexJson {
    index: String,
    length: Option<u64>,
    boundary: bool,
}

#[derive(Serialize)]
struct EdgeJson<'a> {
    from: String,
    to: String,
    generator: &'a str,
    ratio: f64,
}

impl GrowthGraph {
    fn lengths_or_none(&self) -> (Option<SpectrumIndex>, Vec<Option<u64>>) {
        match find_root(self) {
            Some(r) => {
                let start = self.vertex_position(&r).expect("root is a vertex");
                (Some(r), self.bfs(start))
            }
            None => (None, vec![None; self.vertices.len()]),
        }
    }

    pub fn to_json(&self) -> String {
        let (root, lengths) = self.lengths_or_none();
        let doc = GraphJson {
            schema_version: 1,
            family: self.fam.family,
            n: self.fam.n,
            cutoff: self.cutoff,
            c: self.c,
            norm: self.norm,
            root: root.map(|r| r.to_string()),
            generators: self.generators.generators().iter().map(|g| g.name.as_str()).collect(),
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(i, v)| VertexJson { index: v.to_string(), length: lengths[i], boundary: self.boundary[i] })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    from: self.vertices[e.from].to_string(),
                    to: self.vertices[e.to].to_string(),
                    generator: &self.generators.generators()[e.generator].name,
                    ratio: e.ratio,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("graph serializes")
    }

    pub fn to_dot(&self) -> String {
        let (root, lengths) = self.lengths_or_none();
        let mut out = String::new();
        let _ = writeln!(out, "digraph growth {{");
        let _ = writeln!(
            out,
            "  label=\"{} c={} norm={} cutoff={}\";",
            self.fam, self.c, self.norm, self.cutoff
        );
        for (i, v) in self.vertices.iter().enumerate() {
            let mut attrs = match lengths[i] {
                Some(l) => format!("label=\"{v}\\nl={l}\""),
                None => format!("label=\"{v}\""),
            };
            if Some(*v) == root {
                attrs.push_str(", style=filled, fillcolor=gold");
            } else if self.boundary[i] {
                attrs.push_str(", style=dashed");
            }
            let _ = writeln!(out, "  v{i} [{attrs}];");
        }
        for e in &self.edges {
            let name = &self.generators.generators()[e.generator].name;
            let _ = writeln!(out, "  v{} -> v{} [label=\"{} {:.6}\"];", e.from, e.to, name, e.ratio);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_text(&self) -> String {
        let (root, lengths) = self.lengths_or_none();
        let mut out = String::new();
        let _ = writeln!(out, "{} c={} norm={} cutoff={}", self.fam, self.c, self.norm, self.cutoff);
        match root {
            Some(r) => {
                let _ = writeln!(out, "root {r}");
            }
            None => out.push_str("no root\n"),
        }
        let _ = writeln!(out, "vertices {} edges {}", self.vertices.len(), self.edges.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let targets: Vec<String> =
                self.out_edges[i].iter().map(|&e| self.vertices[self.edges[e].to].to_string()).collect();
            let len = lengths[i].map_or("-".to_string(), |l| l.to_string());
            let _ = writeln!(out, "{v} l={len} -> [{}]", targets.join(" "));
        }
        out
    }
}
