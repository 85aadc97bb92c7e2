//! Executable path-space formulas: evaluation fibrations, reparametrization
//! comparison maps, the explicit homotopy-lifting extension, and section
//! transport along a homotopy equivalence, plus numeric checkers.
//!
//! Model spaces are Euclidean factors and circles `R/Z` (and finite products
//! of those); the formulas themselves are space-agnostic reparametrizations.
//! All checks are sampled on dyadic grids with explicit tolerances:
//! reparametrization identities are exact up to roundoff (`1e-12`), while
//! the lifting extension's boundary identities are checked at `1e-9`.
//! Everything is generic over the float scalar; the crate root fixes the
//! `f64` aliases.

mod lift;
mod suites;

pub use lift::{lift_extend, transport_section, LiftedHomotopy, SectionTransport};
pub use suites::{
    check_continuity, lift_suite, piecewise_linear_section, random_path, reparam_suite,
    section_suite, CheckLine, ContinuityReport, LevelGap, SuiteReport,
};

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, ToPrimitive};
use thiserror::Error;

/// Float scalars the path machinery is generic over.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + fmt::Debug + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + fmt::Debug + Send + Sync + 'static
{
}

pub(crate) fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 converts into the scalar type")
}

/// Tolerance for boundary conditions checked at construction and for the
/// reparametrization identities.
pub const REPARAM_TOL: f64 = 1e-12;
/// Tolerance for the lifting extension's compatibility and boundary checks.
pub const LIFT_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum PathError {
    #[error("arity {0} is not in 1..=3")]
    BadArity(usize),
    #[error("based/loop boundary conditions apply to arity-1 maps only")]
    BoundaryArity,
    #[error("{which}(…) is {dist:.3e} away from the basepoint (tolerance {tol:.1e})")]
    BoundaryViolation { which: &'static str, dist: f64, tol: f64 },
    #[error("fibration {kind} requires {requirement}")]
    KindMismatch { kind: &'static str, requirement: &'static str },
    #[error("{what} requires n >= {min}, got {n}")]
    BadN { what: &'static str, min: u32, n: u32 },
    #[error("scale factor {0} is outside (0, 1]")]
    BadScale(String),
    #[error("compatibility violated: {what} differ by {dist:.3e} at y = {y} (tolerance {tol:.1e})")]
    Compatibility { what: String, y: f64, dist: f64, tol: f64 },
    #[error("waypoint tuple has {got} points, expected {want}")]
    TupleLen { got: usize, want: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("continuity check requires levels >= 2, got {0}")]
    BadLevels(u32),
    #[error("point/space dimension mismatch: point has {got} coordinates, space has {want}")]
    DimensionMismatch { got: usize, want: usize },
}

/// One coordinate factor of a model space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coord {
    /// The real line with the standard metric.
    Line,
    /// The circle `R/Z` with arc distance.
    Circle,
}

/// A finite product of lines and circles, with the product metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpace {
    coords: Vec<Coord>,
}

impl ModelSpace {
    pub fn euclidean(d: usize) -> Self {
        ModelSpace { coords: vec![Coord::Line; d] }
    }

    pub fn circle() -> Self {
        ModelSpace { coords: vec![Coord::Circle] }
    }

    pub fn torus(d: usize) -> Self {
        ModelSpace { coords: vec![Coord::Circle; d] }
    }

    pub fn product(mut self, other: &ModelSpace) -> Self {
        self.coords.extend_from_slice(&other.coords);
        self
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    /// The distinguished point: the origin (all coordinates zero).
    pub fn basepoint<T: Real>(&self) -> Point<T> {
        Point { coords: vec![T::zero(); self.coords.len()] }
    }

    pub fn dist<T: Real>(&self, a: &Point<T>, b: &Point<T>) -> T {
        debug_assert_eq!(a.coords.len(), self.coords.len());
        debug_assert_eq!(b.coords.len(), self.coords.len());
        let mut sum = T::zero();
        for ((&ca, &cb), kind) in a.coords.iter().zip(&b.coords).zip(&self.coords) {
            let d = match kind {
                Coord::Line => ca - cb,
                Coord::Circle => {
                    let mut r = (ca - cb).fract().abs();
                    let half = real::<T>(0.5);
                    if r > half {
                        r = T::one() - r;
                    }
                    r
                }
            };
            sum = sum + d * d;
        }
        sum.sqrt()
    }
}

impl fmt::Display for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines = self.coords.iter().filter(|c| **c == Coord::Line).count();
        let circles = self.coords.len() - lines;
        match (lines, circles) {
            (0, 0) => write!(f, "point"),
            (l, 0) => write!(f, "R^{l}"),
            (0, c) if c == 1 => write!(f, "S^1"),
            (0, c) => write!(f, "(S^1)^{c}"),
            (l, c) => write!(f, "R^{l} x (S^1)^{c}"),
        }
    }
}

/// A point of a model space.
#[derive(Clone, Debug, PartialEq)]
pub struct Point<T> {
    pub coords: Vec<T>,
}

impl<T: Real> Point<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Declared boundary behaviour of an arity-1 path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// `f(0)` is the basepoint.
    Based,
    /// `f(0) = f(1)` is the basepoint.
    Loop,
    /// No condition.
    Free,
}

/// A total map `[0,1]^a -> X` for a model space `X` and arity `a` in 1..=3.
/// Based and loop conditions are checked numerically at construction
/// (tolerance [`REPARAM_TOL`]).
#[derive(Clone)]
pub struct PathMap<T: Real> {
    space: ModelSpace,
    arity: usize,
    boundary: Boundary,
    eval: Arc<dyn Fn(&[T]) -> Point<T> + Send + Sync>,
}

impl<T: Real> PathMap<T> {
    pub fn new(
        space: ModelSpace,
        arity: usize,
        boundary: Boundary,
        eval: impl Fn(&[T]) -> Point<T> + Send + Sync + 'static,
    ) -> Result<Self, PathError> {
        if !(1..=3).contains(&arity) {
            return Err(PathError::BadArity(arity));
        }
        if arity != 1 && boundary != Boundary::Free {
            return Err(PathError::BoundaryArity);
        }
        let map = PathMap { space, arity, boundary, eval: Arc::new(eval) };
        if arity == 1 && boundary != Boundary::Free {
            let x0 = map.space.basepoint();
            let tol = real::<T>(REPARAM_TOL);
            let d0 = map.space.dist(&map.at(T::zero()), &x0);
            if d0 > tol {
                return Err(PathError::BoundaryViolation {
                    which: "f(0)",
                    dist: d0.to_f64().unwrap_or(f64::NAN),
                    tol: REPARAM_TOL,
                });
            }
            if boundary == Boundary::Loop {
                let d1 = map.space.dist(&map.at(T::one()), &x0);
                if d1 > tol {
                    return Err(PathError::BoundaryViolation {
                        which: "f(1)",
                        dist: d1.to_f64().unwrap_or(f64::NAN),
                        tol: REPARAM_TOL,
                    });
                }
            }
        }
        Ok(map)
    }

    pub fn constant(space: ModelSpace, value: Point<T>, boundary: Boundary) -> Result<Self, PathError> {
        if value.dim() != space.dim() {
            return Err(PathError::DimensionMismatch { got: value.dim(), want: space.dim() });
        }
        PathMap::new(space, 1, boundary, move |_: &[T]| value.clone())
    }

    /// Uniform-speed piecewise-linear interpolation through `points`
    /// (circle coordinates interpolate in the universal cover).
    pub fn piecewise_linear(
        space: ModelSpace,
        points: Vec<Point<T>>,
        boundary: Boundary,
    ) -> Result<Self, PathError> {
        if points.len() < 2 {
            return Err(PathError::Precondition(
                "piecewise-linear path needs at least 2 points".into(),
            ));
        }
        for p in &points {
            if p.dim() != space.dim() {
                return Err(PathError::DimensionMismatch { got: p.dim(), want: space.dim() });
            }
        }
        let segments = points.len() - 1;
        PathMap::new(space, 1, boundary, move |params: &[T]| {
            let t = params[0].max(T::zero()).min(T::one());
            let scaled = t * real::<T>(segments as f64);
            let mut seg = scaled.floor().to_usize().unwrap_or(0);
            if seg >= segments {
                seg = segments - 1;
            }
            let frac = scaled - real::<T>(seg as f64);
            let a = &points[seg];
            let b = &points[seg + 1];
            let coords = a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| x + (y - x) * frac)
                .collect();
            Point { coords }
        })
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Evaluate an arity-1 map.
    pub fn at(&self, t: T) -> Point<T> {
        debug_assert_eq!(self.arity, 1);
        (self.eval)(&[t])
    }

    pub fn eval(&self, params: &[T]) -> Point<T> {
        debug_assert_eq!(params.len(), self.arity);
        (self.eval)(params)
    }
}

impl<T: Real> fmt::Debug for PathMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PathMap {{ space: {}, arity: {}, boundary: {:?} }}",
            self.space, self.arity, self.boundary
        )
    }
}

/// An ordered tuple of points of `X`, the target of the evaluation
/// fibrations.
#[derive(Clone, Debug, PartialEq)]
pub struct WaypointTuple<T> {
    pub points: Vec<Point<T>>,
}

impl<T: Real> WaypointTuple<T> {
    pub fn new(points: Vec<Point<T>>) -> Self {
        assert!(!points.is_empty(), "waypoint tuples have length >= 1");
        WaypointTuple { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest per-slot distance to `other`.
    pub fn max_dist(&self, other: &WaypointTuple<T>, space: &ModelSpace) -> T {
        debug_assert_eq!(self.len(), other.len());
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| space.dist(a, b))
            .fold(T::zero(), T::max)
    }
}

/// The four evaluation fibrations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FibrationKind {
    /// `p_n` on based paths: `(f(1/n), ..., f((n-1)/n), f(1))`.
    BasedPath,
    /// `q_n` on based loops: `(f(1/(n+1)), ..., f(n/(n+1)))`.
    BasedLoop,
    /// `P_n` on free paths: `(f(0), f(1/(n-1)), ..., f(1))`, n >= 2.
    FreePath,
    /// `Q_n` on free loops: `(f(0), f(1/n), ..., f((n-1)/n))`, n >= 2.
    FreeLoop,
}

impl fmt::Display for FibrationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FibrationKind::BasedPath => write!(f, "p"),
            FibrationKind::BasedLoop => write!(f, "q"),
            FibrationKind::FreePath => write!(f, "P"),
            FibrationKind::FreeLoop => write!(f, "Q"),
        }
    }
}

/// Applies one of the evaluation fibrations to an arity-1 path.
pub fn evaluate_fibration<T: Real>(
    f: &PathMap<T>,
    kind: FibrationKind,
    n: u32,
) -> Result<WaypointTuple<T>, PathError> {
    if f.arity() != 1 {
        return Err(PathError::BadArity(f.arity()));
    }
    let frac = |num: u32, den: u32| real::<T>(num as f64) / real::<T>(den as f64);
    let points = match kind {
        FibrationKind::BasedPath => {
            if f.boundary() == Boundary::Free {
                return Err(PathError::KindMismatch { kind: "p", requirement: "a based path" });
            }
            if n < 1 {
                return Err(PathError::BadN { what: "p_n", min: 1, n });
            }
            (1..=n).map(|i| f.at(frac(i, n))).collect()
        }
        FibrationKind::BasedLoop => {
            if f.boundary() != Boundary::Loop {
                return Err(PathError::KindMismatch { kind: "q", requirement: "a based loop" });
            }
            if n < 1 {
                return Err(PathError::BadN { what: "q_n", min: 1, n });
            }
            (1..=n).map(|i| f.at(frac(i, n + 1))).collect()
        }
        FibrationKind::FreePath => {
            if n < 2 {
                return Err(PathError::BadN { what: "P_n", min: 2, n });
            }
            (0..n).map(|i| f.at(frac(i, n - 1))).collect()
        }
        FibrationKind::FreeLoop => {
            if f.boundary() == Boundary::Based {
                return Err(PathError::KindMismatch { kind: "Q", requirement: "a loop" });
            }
            if n < 2 {
                return Err(PathError::BadN { what: "Q_n", min: 2, n });
            }
            (0..n).map(|i| f.at(frac(i, n))).collect()
        }
    };
    Ok(WaypointTuple::new(points))
}

/// `t -> f(c*t)` for a rational `c` in `(0, 1]`. Preserves basedness; the
/// loop condition survives only at `c = 1`.
pub fn prefix_scale<T: Real>(f: &PathMap<T>, c: Ratio<i64>) -> Result<PathMap<T>, PathError> {
    if f.arity() != 1 {
        return Err(PathError::BadArity(f.arity()));
    }
    if c <= Ratio::new(0, 1) || c > Ratio::new(1, 1) {
        return Err(PathError::BadScale(c.to_string()));
    }
    let boundary = if c == Ratio::new(1, 1) {
        f.boundary()
    } else if f.boundary() == Boundary::Free {
        Boundary::Free
    } else {
        Boundary::Based
    };
    let cf = real::<T>(c.to_f64().expect("ratio fits f64"));
    let inner = f.clone();
    PathMap::new(f.space().clone(), 1, boundary, move |params: &[T]| {
        inner.at(cf * params[0])
    })
}

/// Folds a based path into a based loop: forward at speed `(n+1)/n` until
/// `t = n/(n+1)`, then straight back to the basepoint.
pub fn loop_fold<T: Real>(f: &PathMap<T>, n: u32) -> Result<PathMap<T>, PathError> {
    if f.arity() != 1 {
        return Err(PathError::BadArity(f.arity()));
    }
    if f.boundary() == Boundary::Free {
        return Err(PathError::KindMismatch { kind: "loop_fold", requirement: "a based path" });
    }
    if n < 1 {
        return Err(PathError::BadN { what: "loop_fold", min: 1, n });
    }
    let nf = real::<T>(n as f64);
    let np1 = real::<T>((n + 1) as f64);
    let split = nf / np1;
    let inner = f.clone();
    PathMap::new(f.space().clone(), 1, Boundary::Loop, move |params: &[T]| {
        let t = params[0];
        if t <= split {
            inner.at(np1 / nf * t)
        } else {
            inner.at(np1 * (T::one() - t))
        }
    })
}

/// Embeds a based path as the free path `t -> f((n-1)t/n + 1/n)`, which
/// forgets the based prefix `[0, 1/n]`.
pub fn shift_embed<T: Real>(f: &PathMap<T>, n: u32) -> Result<PathMap<T>, PathError> {
    if f.arity() != 1 {
        return Err(PathError::BadArity(f.arity()));
    }
    if f.boundary() == Boundary::Free {
        return Err(PathError::KindMismatch { kind: "shift_embed", requirement: "a based path" });
    }
    if n < 2 {
        return Err(PathError::BadN { what: "shift_embed", min: 2, n });
    }
    let nf = real::<T>(n as f64);
    let shift = T::one() / nf;
    let slope = real::<T>((n - 1) as f64) / nf;
    let inner = f.clone();
    PathMap::new(f.space().clone(), 1, Boundary::Free, move |params: &[T]| {
        inner.at(slope * params[0] + shift)
    })
}
