//! Hierarchical quadrilateral shape functions built from integrated Legendre
//! polynomials.
//!
//! Local mode ordering is degree-major: the four vertex modes
//! (counterclockwise from the lower-left corner), then for every degree
//! `k = 2..=p` the edge modes of that degree (bottom, right, top, left)
//! followed by the interior modes first admitted at degree `k` in
//! lexicographic order. A degree `p - 1` set is therefore always a prefix of
//! the degree `p` set.
//!
//! Edge modes are parametrized along the global `+x` (horizontal edges) and
//! `+y` (vertical edges) directions, so neighbouring cells of an axis-aligned
//! grid share edge modes without sign flips.

/// Polynomial space spanned on each cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolySpace {
    Trunk,
    Tensor,
}

impl PolySpace {
    pub fn name(self) -> &'static str {
        match self {
            PolySpace::Trunk => "trunk",
            PolySpace::Tensor => "tensor",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "trunk" => Some(PolySpace::Trunk),
            "tensor" => Some(PolySpace::Tensor),
            _ => None,
        }
    }
}

/// Cell edge, counterclockwise from the bottom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    Bottom,
    Right,
    Top,
    Left,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Bottom, Edge::Right, Edge::Top, Edge::Left];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeKind {
    /// Vertex `0..4`, counterclockwise from lower-left.
    Vertex(usize),
    /// Edge mode of polynomial degree `degree >= 2`.
    Edge { edge: Edge, degree: usize },
    /// Product of the 1D bubbles of degree `i` in ξ and `j` in η.
    Interior { i: usize, j: usize },
}

/// Mode descriptor plus the pair of 1D factor indices (ξ-factor, η-factor).
///
/// Factor index 0 is `(1 - s)/2`, 1 is `(1 + s)/2`, `k >= 2` is the
/// integrated Legendre bubble of degree `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mode {
    pub kind: ModeKind,
    pub factors: (usize, usize),
}

/// Number of interior modes per cell.
pub fn interior_mode_count(degree: usize, space: PolySpace) -> usize {
    match space {
        PolySpace::Trunk => {
            if degree >= 4 {
                (degree - 2) * (degree - 3) / 2
            } else {
                0
            }
        }
        PolySpace::Tensor => {
            if degree >= 2 {
                (degree - 1) * (degree - 1)
            } else {
                0
            }
        }
    }
}

/// Modes per cell for one solution component.
pub fn modes_per_cell(degree: usize, space: PolySpace) -> usize {
    4 + 4 * degree.saturating_sub(1) + interior_mode_count(degree, space)
}

/// Modes per cell times the number of field components.
pub fn mode_count(degree: usize, space: PolySpace, n_components: usize) -> usize {
    modes_per_cell(degree, space) * n_components
}

/// The full set of modes of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSet2D {
    degree: usize,
    space: PolySpace,
    modes: Vec<Mode>,
}

/// Values and reference-coordinate gradients of all modes at one point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShapeValues {
    pub values: Vec<f64>,
    pub gradients: Vec<[f64; 2]>,
}

impl ShapeSet2D {
    pub fn new(degree: usize, space: PolySpace) -> Self {
        assert!(degree >= 1, "shape degree must be at least 1");
        let mut modes = vec![
            Mode { kind: ModeKind::Vertex(0), factors: (0, 0) },
            Mode { kind: ModeKind::Vertex(1), factors: (1, 0) },
            Mode { kind: ModeKind::Vertex(2), factors: (1, 1) },
            Mode { kind: ModeKind::Vertex(3), factors: (0, 1) },
        ];
        for k in 2..=degree {
            for edge in Edge::ALL {
                let factors = match edge {
                    Edge::Bottom => (k, 0),
                    Edge::Right => (1, k),
                    Edge::Top => (k, 1),
                    Edge::Left => (0, k),
                };
                modes.push(Mode { kind: ModeKind::Edge { edge, degree: k }, factors });
            }
            for i in 2..=k {
                for j in 2..=k {
                    let admitted_at = match space {
                        PolySpace::Trunk => i + j,
                        PolySpace::Tensor => i.max(j),
                    };
                    if admitted_at == k {
                        modes.push(Mode { kind: ModeKind::Interior { i, j }, factors: (i, j) });
                    }
                }
            }
        }
        debug_assert_eq!(modes.len(), modes_per_cell(degree, space));
        Self { degree, space, modes }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn space(&self) -> PolySpace {
        self.space
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Evaluates all modes at `xi` in the reference square.
    pub fn eval(&self, xi: [f64; 2]) -> ShapeValues {
        let mut out = ShapeValues::default();
        self.eval_into(xi, &mut out);
        out
    }

    /// Like [`eval`](Self::eval) but reuses the buffers in `out`.
    pub fn eval_into(&self, xi: [f64; 2], out: &mut ShapeValues) {
        let n = self.degree + 1;
        assert!(n <= MAX_TABLE, "shape degree too large");
        let (mut fx, mut dx) = ([0.0; MAX_TABLE], [0.0; MAX_TABLE]);
        let (mut fy, mut dy) = ([0.0; MAX_TABLE], [0.0; MAX_TABLE]);
        factors_1d(self.degree, xi[0], &mut fx[..n], &mut dx[..n]);
        factors_1d(self.degree, xi[1], &mut fy[..n], &mut dy[..n]);
        out.values.clear();
        out.gradients.clear();
        for m in &self.modes {
            let (a, b) = m.factors;
            out.values.push(fx[a] * fy[b]);
            out.gradients.push([dx[a] * fy[b], fx[a] * dy[b]]);
        }
    }

    /// Values only, without gradients.
    pub fn values_into(&self, xi: [f64; 2], values: &mut Vec<f64>) {
        let n = self.degree + 1;
        let mut fx = [0.0; MAX_TABLE];
        let mut fy = [0.0; MAX_TABLE];
        let mut scratch = [0.0; MAX_TABLE];
        factors_1d(self.degree, xi[0], &mut fx[..n], &mut scratch[..n]);
        factors_1d(self.degree, xi[1], &mut fy[..n], &mut scratch[..n]);
        values.clear();
        values.extend(self.modes.iter().map(|m| fx[m.factors.0] * fy[m.factors.1]));
    }
}

const MAX_TABLE: usize = 32;

/// 1D factors: the two linear hats followed by integrated Legendre bubbles
/// `(P_k - P_{k-2}) / sqrt(2(2k-1))` for `k = 2..=degree`.
fn factors_1d(degree: usize, s: f64, values: &mut [f64], derivs: &mut [f64]) {
    values[0] = 0.5 * (1.0 - s);
    derivs[0] = -0.5;
    if degree >= 1 {
        values[1] = 0.5 * (1.0 + s);
        derivs[1] = 0.5;
    }
    if degree < 2 {
        return;
    }
    // Legendre P_0..P_degree
    let mut leg = [0.0; MAX_TABLE + 1];
    leg[0] = 1.0;
    leg[1] = s;
    for k in 2..=degree {
        let kf = k as f64;
        leg[k] = ((2.0 * kf - 1.0) * s * leg[k - 1] - (kf - 1.0) * leg[k - 2]) / kf;
    }
    for k in 2..=degree {
        let c = (2.0 * (2.0 * k as f64 - 1.0)).sqrt();
        values[k] = (leg[k] - leg[k - 2]) / c;
        derivs[k] = ((2.0 * k as f64 - 1.0) / 2.0).sqrt() * leg[k - 1];
    }
}
