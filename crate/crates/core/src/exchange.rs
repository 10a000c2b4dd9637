//! Hearts as a torsor over the autoequivalence group, simple tilts, and
//! breadth-first generation of balls of the exchange graph and its
//! shift- and twist-subgroup quotients.

use crate::braid::{compose, ell_mod5, psl2_image, reduce, AutElement, Psl2Class, Word};
use crate::lattice::KClass;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write as _;
use thiserror::Error;

/// A simple object of a heart: its class together with a shift tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Simple {
    pub class: KClass,
    pub shift_tag: i64,
}

impl Simple {
    fn shifted(self, by: i64) -> Simple {
        let sign = if by.rem_euclid(2) == 0 { 1 } else { -1 };
        Simple {
            class: sign * self.class,
            shift_tag: self.shift_tag + by,
        }
    }
}

/// A vertex of the exchange graph: the translate of the standard heart by
/// `g`, carrying its ordered (T-role, S-role) simples and the shift tag of
/// the extension object between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Heart {
    pub g: AutElement,
    pub t_role: Simple,
    pub s_role: Simple,
    ext_tag: i64,
}

/// Which simple a tilt is performed at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    TRole,
    SRole,
}

/// Left or right tilt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Edge labels of the exchange graph, i.e. the four tilt generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TiltGen {
    Delta,
    Sigma,
    DeltaInv,
    SigmaInv,
}

impl TiltGen {
    pub const ALL: [TiltGen; 4] = [
        TiltGen::Delta,
        TiltGen::Sigma,
        TiltGen::DeltaInv,
        TiltGen::SigmaInv,
    ];

    pub fn element(self) -> AutElement {
        match self {
            TiltGen::Delta => reduce(&Word::big_delta()),
            TiltGen::Sigma => reduce(&Word::big_sigma()),
            TiltGen::DeltaInv => reduce(&Word::big_delta().inverse()),
            TiltGen::SigmaInv => reduce(&Word::big_sigma().inverse()),
        }
    }

    pub fn inverse(self) -> TiltGen {
        match self {
            TiltGen::Delta => TiltGen::DeltaInv,
            TiltGen::Sigma => TiltGen::SigmaInv,
            TiltGen::DeltaInv => TiltGen::Delta,
            TiltGen::SigmaInv => TiltGen::Sigma,
        }
    }

    pub fn of(role: Role, side: Side) -> TiltGen {
        match (role, side) {
            (Role::SRole, Side::Right) => TiltGen::Delta,
            (Role::TRole, Side::Right) => TiltGen::Sigma,
            (Role::TRole, Side::Left) => TiltGen::DeltaInv,
            (Role::SRole, Side::Left) => TiltGen::SigmaInv,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TiltGen::Delta => "Delta",
            TiltGen::Sigma => "Sigma",
            TiltGen::DeltaInv => "Delta⁻¹",
            TiltGen::SigmaInv => "Sigma⁻¹",
        }
    }
}

/// The standard heart: identity coset, simples `(T, S)` with extension `E`.
pub fn standard_heart() -> Heart {
    Heart {
        g: AutElement::IDENTITY,
        t_role: Simple {
            class: KClass::T,
            shift_tag: 0,
        },
        s_role: Simple {
            class: KClass::S,
            shift_tag: 0,
        },
        ext_tag: 0,
    }
}

impl Heart {
    /// The extension object between the two simples; its class is the sum
    /// of the simple classes.
    pub fn ext(&self) -> Simple {
        Simple {
            class: self.t_role.class + self.s_role.class,
            shift_tag: self.ext_tag,
        }
    }
}

/// Tilts a heart once. The tilt table of the standard heart is transported
/// along the torsor structure: the group element picks up the matching
/// generator on the right, and the new simples are re-expressed in terms of
/// the old ones.
pub fn simple_tilt(h: &Heart, role: Role, side: Side) -> Heart {
    let gen = TiltGen::of(role, side);
    let g = compose(h.g, gen.element());
    let (t_role, s_role, ext_tag) = match gen {
        // (S[1], T)_{X[1]}
        TiltGen::Delta => (h.s_role.shifted(1), h.t_role, h.ext_tag + 1),
        // (E, T[1])_S
        TiltGen::Sigma => (h.ext(), h.t_role.shifted(1), h.s_role.shift_tag),
        // (S, T[-1])_{X[-1]}
        TiltGen::DeltaInv => (h.s_role, h.t_role.shifted(-1), h.ext_tag - 1),
        // (S[-1], E)_T
        TiltGen::SigmaInv => (h.s_role.shifted(-1), h.ext(), h.t_role.shift_tag),
    };
    Heart {
        g,
        t_role,
        s_role,
        ext_tag,
    }
}

/// Applies `a` on the left of the heart's group element; simples follow
/// the lattice action of `a` (tags transported by the shift residue sign
/// only, which is all the lattice sees).
pub fn translate(a: AutElement, h: &Heart) -> Heart {
    let act = |s: Simple| Simple {
        class: a.k_matrix.apply(s.class),
        shift_tag: s.shift_tag,
    };
    Heart {
        g: compose(a, h.g),
        t_role: act(h.t_role),
        s_role: act(h.s_role),
        ext_tag: h.ext_tag,
    }
}

/// Quotient applied to ball vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quotient {
    None,
    Shift,
    Sph,
}

/// Canonical vertex key under a chosen quotient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexKey {
    Full(AutElement),
    Projective(Psl2Class),
    Cluster(u8),
}

fn vertex_key(q: Quotient, g: AutElement) -> VertexKey {
    match q {
        Quotient::None => VertexKey::Full(g),
        Quotient::Shift => VertexKey::Projective(psl2_image(g)),
        Quotient::Sph => VertexKey::Cluster(ell_mod5(g)),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BallVertex {
    pub key: VertexKey,
    pub depth: usize,
    /// A representative heart for this vertex.
    pub heart: Heart,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExchangeGraphBall {
    pub radius: usize,
    pub quotient: Quotient,
    pub vertices: Vec<BallVertex>,
    /// Labeled directed edges, stored both ways; the graph is undirected.
    pub edges: Vec<(usize, usize, TiltGen)>,
    #[serde(skip)]
    index: HashMap<VertexKey, usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExchangeError {
    #[error("ball radius {0} exceeds the guard (12)")]
    RadiusGuard(usize),
}

pub const RADIUS_GUARD: usize = 12;

/// Breadth-first ball of the exchange graph around the standard heart.
pub fn generate_ball(
    radius: usize,
    quotient: Quotient,
) -> Result<ExchangeGraphBall, ExchangeError> {
    if radius > RADIUS_GUARD {
        return Err(ExchangeError::RadiusGuard(radius));
    }
    let mut vertices: Vec<BallVertex> = Vec::new();
    let mut index: HashMap<VertexKey, usize> = HashMap::new();
    let mut edges: Vec<(usize, usize, TiltGen)> = Vec::new();
    let mut edge_set: std::collections::HashSet<(usize, usize, TiltGen)> =
        std::collections::HashSet::new();

    let start = standard_heart();
    let start_key = vertex_key(quotient, start.g);
    index.insert(start_key, 0);
    vertices.push(BallVertex {
        key: start_key,
        depth: 0,
        heart: start,
    });

    let mut frontier = vec![0usize];
    for depth in 1..=radius {
        let mut next = Vec::new();
        for &vi in &frontier {
            let heart = vertices[vi].heart;
            for gen in TiltGen::ALL {
                let (role, side) = match gen {
                    TiltGen::Delta => (Role::SRole, Side::Right),
                    TiltGen::Sigma => (Role::TRole, Side::Right),
                    TiltGen::DeltaInv => (Role::TRole, Side::Left),
                    TiltGen::SigmaInv => (Role::SRole, Side::Left),
                };
                let h2 = simple_tilt(&heart, role, side);
                let key = vertex_key(quotient, h2.g);
                let wi = *index.entry(key).or_insert_with(|| {
                    vertices.push(BallVertex {
                        key,
                        depth,
                        heart: h2,
                    });
                    next.push(vertices.len() - 1);
                    vertices.len() - 1
                });
                if edge_set.insert((vi, wi, gen)) {
                    edges.push((vi, wi, gen));
                }
                if edge_set.insert((wi, vi, gen.inverse())) {
                    edges.push((wi, vi, gen.inverse()));
                }
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }

    Ok(ExchangeGraphBall {
        radius,
        quotient,
        vertices,
        edges,
        index,
    })
}

impl ExchangeGraphBall {
    pub fn vertex_of(&self, g: AutElement) -> Option<usize> {
        self.index.get(&vertex_key(self.quotient, g)).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        // Outgoing labeled edges; parallel edges under a quotient count once
        // per label.
        self.edges.iter().filter(|(a, _, _)| *a == v).count()
    }

    pub fn neighbors(&self, v: usize) -> Vec<(usize, TiltGen)> {
        self.edges
            .iter()
            .filter(|(a, _, _)| *a == v)
            .map(|(_, b, g)| (*b, *g))
            .collect()
    }

    /// DOT-format rendering of the ball.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph exchange_ball {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let label = match v.key {
                VertexKey::Full(g) => format!(
                    "{:?}|t{}|r{}",
                    g.k_matrix.matrix().0,
                    g.twist_sum,
                    g.shift_res
                ),
                VertexKey::Projective(p) => format!("{:?}", p.representative().0),
                VertexKey::Cluster(c) => format!("{c}"),
            };
            let _ = writeln!(out, "  v{i} [label=\"{label}\"];");
        }
        for (a, b, gen) in &self.edges {
            if a < b {
                let _ = writeln!(out, "  v{a} -- v{b} [label=\"{}\"];", gen.label());
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "radius": self.radius,
            "quotient": self.quotient,
            "vertices": self.vertices,
            "edges": self.edges,
        })
    }
}

/// Result of consistency checks of the defining relation on a ball.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationReport {
    pub walks_checked: u64,
    pub closed_walks: u64,
    pub consistent: bool,
    pub sigma3_delta2_same_vertex: bool,
    pub sigma_delta_closes: bool,
}

/// Walks every word of length <= `max_len` in the tilt generators and checks
/// that the walk closes in the ball iff the word reduces to the identity
/// (verified against direct matrix accumulation).
pub fn verify_relation_ball(ball: &ExchangeGraphBall, max_len: usize) -> RelationReport {
    assert_eq!(
        ball.quotient,
        Quotient::None,
        "relation check needs the full ball"
    );
    let gens: Vec<AutElement> = TiltGen::ALL.iter().map(|g| g.element()).collect();
    let mut walks_checked = 0u64;
    let mut closed_walks = 0u64;
    let mut consistent = true;

    // Iterative DFS over words; prune only by length.
    let mut stack: Vec<(AutElement, usize)> = vec![(AutElement::IDENTITY, 0)];
    while let Some((g, len)) = stack.pop() {
        if len > 0 {
            walks_checked += 1;
            let closed = g.is_identity();
            if closed {
                closed_walks += 1;
            }
            // The ball's vertex lookup must agree with the reduce-equality.
            if let Some(v) = ball.vertex_of(g) {
                if (v == 0) != closed {
                    consistent = false;
                }
            } else if closed {
                consistent = false;
            }
        }
        if len < max_len {
            for e in &gens {
                stack.push((compose(g, *e), len + 1));
            }
        }
    }

    let sigma3 = reduce(&Word::big_sigma().pow(3));
    let delta2 = reduce(&Word::big_delta().pow(2));
    let sigma_delta = reduce(&Word::big_sigma().concat(&Word::big_delta()));
    RelationReport {
        walks_checked,
        closed_walks,
        consistent,
        sigma3_delta2_same_vertex: ball.vertex_of(sigma3).is_some()
            && ball.vertex_of(sigma3) == ball.vertex_of(delta2),
        sigma_delta_closes: sigma_delta.is_identity(),
    }
}

/// Brute-force oracle: the number of distinct reduced elements represented
/// by words of length <= `radius` in the four tilt generators.
pub fn count_elements_brute_force(radius: usize) -> usize {
    let gens: Vec<AutElement> = TiltGen::ALL.iter().map(|g| g.element()).collect();
    let mut seen = std::collections::HashSet::new();
    seen.insert(AutElement::IDENTITY);
    let mut frontier = vec![AutElement::IDENTITY];
    for _ in 0..radius {
        let mut next = Vec::new();
        for g in frontier {
            for e in &gens {
                let h = compose(g, *e);
                if seen.insert(h) {
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    seen.len()
}
