use std::fmt;

/// A point or vector in the plane, in metres.
pub type Point = [f64; 2];

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Self {
        Self { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max[0] - self.min[0]
    }

    pub fn height(&self) -> f64 {
        self.max[1] - self.min[1]
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn center(&self) -> Point {
        [0.5 * (self.min[0] + self.max[0]), 0.5 * (self.min[1] + self.max[1])]
    }

    pub fn is_degenerate(&self) -> bool {
        !(self.width() > 0.0 && self.height() > 0.0) || !self.width().is_finite() || !self.height().is_finite()
    }

    /// Point at reference coordinates `xi` in [-1, 1]^2.
    pub fn map(&self, xi: [f64; 2]) -> Point {
        [
            self.min[0] + 0.5 * (xi[0] + 1.0) * self.width(),
            self.min[1] + 0.5 * (xi[1] + 1.0) * self.height(),
        ]
    }

    /// Children in the order lower-left, lower-right, upper-left, upper-right.
    pub fn quadrants(&self) -> [Rect; 4] {
        let c = self.center();
        [
            Rect::new(self.min, c),
            Rect::new([c[0], self.min[1]], [self.max[0], c[1]]),
            Rect::new([self.min[0], c[1]], [c[0], self.max[1]]),
            Rect::new(c, self.max),
        ]
    }
}

/// Signed geometry function: positive inside the structure, negative in the
/// fluid, zero on the interface.
pub trait LevelSet: Send + Sync {
    fn value(&self, p: Point) -> f64;

    /// Analytic gradient where one is available.
    fn gradient(&self, _p: Point) -> Option<[f64; 2]> {
        None
    }
}

impl<T: LevelSet + ?Sized> LevelSet for &T {
    fn value(&self, p: Point) -> f64 {
        (**self).value(p)
    }
    fn gradient(&self, p: Point) -> Option<[f64; 2]> {
        (**self).gradient(p)
    }
}

/// Level set from a plain closure, without an analytic gradient.
pub struct FnLevelSet<F>(pub F);

impl<F: Fn(Point) -> f64 + Send + Sync> LevelSet for FnLevelSet<F> {
    fn value(&self, p: Point) -> f64 {
        (self.0)(p)
    }
}

/// Constructive solid geometry over simple primitives.
///
/// Union is the maximum and intersection the minimum of the member values,
/// complement negates.
#[derive(Debug, Clone, PartialEq)]
pub enum CsgExpression {
    /// `normal · (x - point) > 0` is inside.
    HalfPlane { point: Point, normal: [f64; 2] },
    Disc { center: Point, radius: f64 },
    Rectangle { min: Point, max: Point },
    Union(Vec<CsgExpression>),
    Intersection(Vec<CsgExpression>),
    Complement(Box<CsgExpression>),
}

impl CsgExpression {
    pub fn half_plane(point: Point, normal: [f64; 2]) -> Self {
        Self::HalfPlane { point, normal }
    }

    pub fn disc(center: Point, radius: f64) -> Self {
        Self::Disc { center, radius }
    }

    pub fn rect(min: Point, max: Point) -> Self {
        Self::Rectangle { min, max }
    }

    pub fn union(children: Vec<CsgExpression>) -> Self {
        Self::Union(children)
    }

    pub fn intersection(children: Vec<CsgExpression>) -> Self {
        Self::Intersection(children)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn complement(child: CsgExpression) -> Self {
        Self::Complement(Box::new(child))
    }

    /// Structural problems, empty when the expression is usable.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        self.validate_into(0, &mut problems);
        problems
    }

    fn validate_into(&self, depth: usize, out: &mut Vec<String>) {
        if depth > MAX_CSG_DEPTH {
            out.push(format!("expression nested deeper than {MAX_CSG_DEPTH}"));
            return;
        }
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite());
        match self {
            Self::HalfPlane { point, normal } => {
                if !finite(point) || !finite(normal) {
                    out.push("halfplane parameters must be finite".into());
                } else if normal[0] == 0.0 && normal[1] == 0.0 {
                    out.push("halfplane normal must be nonzero".into());
                }
            }
            Self::Disc { center, radius } => {
                if !finite(center) || !radius.is_finite() {
                    out.push("disc parameters must be finite".into());
                } else if *radius <= 0.0 {
                    out.push("disc radius must be positive".into());
                }
            }
            Self::Rectangle { min, max } => {
                if !finite(min) || !finite(max) {
                    out.push("rect parameters must be finite".into());
                } else if !(min[0] < max[0] && min[1] < max[1]) {
                    out.push("rect must have min < max in both directions".into());
                }
            }
            Self::Union(c) | Self::Intersection(c) => {
                if c.is_empty() {
                    out.push("union/intersection needs at least one member".into());
                }
                for e in c {
                    e.validate_into(depth + 1, out);
                }
            }
            Self::Complement(c) => c.validate_into(depth + 1, out),
        }
    }

    fn eval_with_gradient(&self, p: Point) -> (f64, [f64; 2]) {
        match self {
            Self::HalfPlane { point, normal } => {
                let len = normal[0].hypot(normal[1]);
                let n = [normal[0] / len, normal[1] / len];
                (n[0] * (p[0] - point[0]) + n[1] * (p[1] - point[1]), n)
            }
            Self::Disc { center, radius } => {
                let d = [p[0] - center[0], p[1] - center[1]];
                let r = d[0].hypot(d[1]);
                let g = if r > 0.0 { [-d[0] / r, -d[1] / r] } else { [0.0, 0.0] };
                (radius - r, g)
            }
            Self::Rectangle { min, max } => rect_distance(min, max, p),
            Self::Union(children) => {
                let mut best = (f64::NEG_INFINITY, [0.0, 0.0]);
                for c in children {
                    let v = c.eval_with_gradient(p);
                    if v.0 > best.0 || v.0.is_nan() {
                        best = v;
                    }
                }
                best
            }
            Self::Intersection(children) => {
                let mut best = (f64::INFINITY, [0.0, 0.0]);
                for c in children {
                    let v = c.eval_with_gradient(p);
                    if v.0 < best.0 || v.0.is_nan() {
                        best = v;
                    }
                }
                best
            }
            Self::Complement(c) => {
                let (v, g) = c.eval_with_gradient(p);
                (-v, [-g[0], -g[1]])
            }
        }
    }

    fn eval_value(&self, p: Point) -> f64 {
        match self {
            Self::Disc { center, radius } => radius - (p[0] - center[0]).hypot(p[1] - center[1]),
            Self::Union(children) => children.iter().map(|c| c.eval_value(p)).fold(f64::NEG_INFINITY, nan_max),
            Self::Intersection(children) => children.iter().map(|c| c.eval_value(p)).fold(f64::INFINITY, nan_min),
            Self::Complement(c) => -c.eval_value(p),
            _ => self.eval_with_gradient(p).0,
        }
    }
}

pub(crate) const MAX_CSG_DEPTH: usize = 64;

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

fn nan_min(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.min(b)
    }
}

fn rect_distance(min: &Point, max: &Point, p: Point) -> (f64, [f64; 2]) {
    let inside = p[0] >= min[0] && p[0] <= max[0] && p[1] >= min[1] && p[1] <= max[1];
    if inside {
        let cands = [
            (p[0] - min[0], [1.0, 0.0]),
            (max[0] - p[0], [-1.0, 0.0]),
            (p[1] - min[1], [0.0, 1.0]),
            (max[1] - p[1], [0.0, -1.0]),
        ];
        let mut best = cands[0];
        for c in &cands[1..] {
            if c.0 < best.0 {
                best = *c;
            }
        }
        best
    } else {
        let dx = if p[0] < min[0] {
            min[0] - p[0]
        } else if p[0] > max[0] {
            max[0] - p[0]
        } else {
            0.0
        };
        let dy = if p[1] < min[1] {
            min[1] - p[1]
        } else if p[1] > max[1] {
            max[1] - p[1]
        } else {
            0.0
        };
        // (dx, dy) points from p towards the rectangle
        let d = dx.hypot(dy);
        (-d, [dx / d, dy / d])
    }
}

impl LevelSet for CsgExpression {
    fn value(&self, p: Point) -> f64 {
        self.eval_value(p)
    }

    fn gradient(&self, p: Point) -> Option<[f64; 2]> {
        let (_, g) = self.eval_with_gradient(p);
        if g[0].is_finite() && g[1].is_finite() && (g[0] != 0.0 || g[1] != 0.0) {
            Some(g)
        } else {
            None
        }
    }
}

impl fmt::Display for CsgExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, name: &str, items: &[CsgExpression]) -> fmt::Result {
            write!(f, "{name}(")?;
            for (i, c) in items.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")
        }
        match self {
            Self::HalfPlane { point, normal } => {
                write!(f, "halfplane({:?}, {:?}, {:?}, {:?})", point[0], point[1], normal[0], normal[1])
            }
            Self::Disc { center, radius } => write!(f, "disc({:?}, {:?}, {:?})", center[0], center[1], radius),
            Self::Rectangle { min, max } => {
                write!(f, "rect({:?}, {:?}, {:?}, {:?})", min[0], min[1], max[0], max[1])
            }
            Self::Union(c) => list(f, "union", c),
            Self::Intersection(c) => list(f, "intersection", c),
            Self::Complement(c) => write!(f, "complement({c})"),
        }
    }
}
