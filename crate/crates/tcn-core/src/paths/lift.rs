//! The explicit homotopy-lifting extension for the based evaluation
//! fibration, and section transport along a homotopy equivalence.
//!
//! Given `G : Y x I -> X` with `G(y,0) = x0` and homotopies
//! `h_1, ..., h_n : Y x I -> X` compatible in the sense
//! `G(y, i/n) = h_i(y, 0)`, the extension `H(y,t,s)` below restricts to `G`
//! at `t = 0`, to `h_i` along `s = i/n`, and to the basepoint along `s = 0`.
//! On each band `j/n <= s <= (j+1)/n` it uses three branches separated at
//! `j/n + 2t/(5n)` and `(j+1)/n - 2t/(5n)`: the outer two push into the
//! neighbouring homotopies at reparametrized times `t*`, `t**` given by
//! radical expressions, the middle one replays `G` on the squeezed band.
//! Branch boundaries can be classified in exact rational arithmetic, which
//! the grid checkers use so that seam points are never misattributed.

use std::sync::Arc;

use num_rational::Ratio;
use num_traits::ToPrimitive;

use super::{
    real, Boundary, ModelSpace, PathError, PathMap, Point, Real, WaypointTuple, LIFT_TOL,
    REPARAM_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Branch {
    /// `h_j(y, t**)` (with `h_0 = x0`), on `j/n <= s <= j/n + 2t/(5n)`.
    Lower,
    /// `G` replayed on the squeezed middle band.
    Middle,
    /// `h_(j+1)(y, t*)`, on `(j+1)/n - 2t/(5n) <= s <= (j+1)/n`.
    Upper,
}

/// The extension `H(y,t,s)`, evaluable in floats or with exact rational
/// branch selection.
#[derive(Clone)]
pub struct LiftedHomotopy<T: Real> {
    g_map: PathMap<T>,
    hs: Vec<PathMap<T>>,
    n: u32,
    space: ModelSpace,
}

/// Builds the extension after verifying the compatibility conditions
/// `G(y,0) = x0` and `G(y, i/n) = h_i(y,0)` on a `samples+1`-point `y` grid
/// at tolerance [`LIFT_TOL`]; a violation reports the worst offending
/// sample.
pub fn lift_extend<T: Real>(
    g_map: &PathMap<T>,
    hs: &[PathMap<T>],
    n: u32,
    samples: usize,
) -> Result<LiftedHomotopy<T>, PathError> {
    if n < 1 {
        return Err(PathError::BadN { what: "lift_extend", min: 1, n });
    }
    if hs.len() != n as usize {
        return Err(PathError::TupleLen { got: hs.len(), want: n as usize });
    }
    if g_map.arity() != 2 {
        return Err(PathError::BadArity(g_map.arity()));
    }
    for h in hs {
        if h.arity() != 2 {
            return Err(PathError::BadArity(h.arity()));
        }
    }
    let space = g_map.space().clone();
    let x0 = space.basepoint::<T>();
    let samples = samples.max(1);
    let mut worst: Option<(f64, String, f64)> = None;
    for k in 0..=samples {
        let y = real::<T>(k as f64 / samples as f64);
        let d0 = space.dist(&g_map.eval(&[y, T::zero()]), &x0).to_f64().unwrap_or(f64::NAN);
        record_worst(&mut worst, d0, y, "G(y,0) vs x0".to_string());
        for i in 1..=n {
            let si = real::<T>(i as f64 / n as f64);
            let d = space
                .dist(&g_map.eval(&[y, si]), &hs[(i - 1) as usize].eval(&[y, T::zero()]))
                .to_f64()
                .unwrap_or(f64::NAN);
            record_worst(&mut worst, d, y, format!("G(y,{i}/{n}) vs h_{i}(y,0)"));
        }
    }
    if let Some((dist, what, y)) = worst {
        if !(dist <= LIFT_TOL) {
            return Err(PathError::Compatibility { what, y, dist, tol: LIFT_TOL });
        }
    }
    Ok(LiftedHomotopy { g_map: g_map.clone(), hs: hs.to_vec(), n, space })
}

fn record_worst<T: Real>(worst: &mut Option<(f64, String, f64)>, d: f64, y: T, what: String) {
    let yf = y.to_f64().unwrap_or(f64::NAN);
    match worst {
        Some((w, _, _)) if *w >= d => {}
        _ => *worst = Some((d, what, yf)),
    }
}

impl<T: Real> LiftedHomotopy<T> {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    /// Float evaluation. Branch selection compares in the scalar type; the
    /// three branch formulas agree at the seams, so a roundoff
    /// misclassification only perturbs by the local modulus of continuity.
    pub fn eval(&self, y: T, t: T, s: T) -> Point<T> {
        let n = self.n;
        let nf = real::<T>(n as f64);
        let mut j = (s * nf).floor().to_i64().unwrap_or(0).max(0) as u32;
        if j > n - 1 {
            j = n - 1;
        }
        let branch = if t == T::zero() {
            Branch::Middle
        } else {
            let jf = real::<T>(j as f64);
            let margin = real::<T>(2.0) * t / (real::<T>(5.0) * nf);
            if s <= jf / nf + margin {
                Branch::Lower
            } else if s >= (jf + T::one()) / nf - margin {
                Branch::Upper
            } else {
                Branch::Middle
            }
        };
        self.eval_branch(y, t, s, j, branch)
    }

    /// Evaluation with exact rational branch selection at `(t, s)`;
    /// the formulas themselves are then computed in floats.
    pub fn eval_at(&self, y: T, t: Ratio<i64>, s: Ratio<i64>) -> Point<T> {
        let n = self.n as i64;
        let mut j = (s * Ratio::from_integer(n)).floor().to_integer().max(0);
        if j > n - 1 {
            j = n - 1;
        }
        let branch = if t == Ratio::from_integer(0) {
            Branch::Middle
        } else {
            let lower_seam = Ratio::new(j, n) + Ratio::new(2, 5 * n) * t;
            let upper_seam = Ratio::new(j + 1, n) - Ratio::new(2, 5 * n) * t;
            if s <= lower_seam {
                Branch::Lower
            } else if s >= upper_seam {
                Branch::Upper
            } else {
                Branch::Middle
            }
        };
        let tf = real::<T>(t.to_f64().expect("ratio fits f64"));
        let sf = real::<T>(s.to_f64().expect("ratio fits f64"));
        self.eval_branch(y, tf, sf, j as u32, branch)
    }

    fn eval_branch(&self, y: T, t: T, s: T, j: u32, branch: Branch) -> Point<T> {
        let nf = real::<T>(self.n as f64);
        let five = real::<T>(5.0);
        let four = real::<T>(4.0);
        let two = real::<T>(2.0);
        let jf = real::<T>(j as f64);
        match branch {
            Branch::Middle => {
                // G(y, (5s - (4j+2)t/n) / (5 - 4t))
                let arg = (five * s - (four * jf + two) * t / nf) / (five - four * t);
                self.g_map.eval(&[y, clamp01(arg)])
            }
            Branch::Upper => {
                // t* = (A - sqrt(A^2 - 4(5ns - 5(j+1) + 2t))) / 2,
                // A = 5ns - 5(j+1) + 2 + t
                let u = five * nf * s - five * (jf + T::one());
                let a = u + two + t;
                let disc = a * a - four * (u + two * t);
                let t_star = (a - disc.max(T::zero()).sqrt()) / two;
                self.hs[j as usize].eval(&[y, clamp01(t_star)])
            }
            Branch::Lower => {
                if j == 0 {
                    // h_0 is the constant basepoint.
                    return self.space.basepoint();
                }
                // t** = (-5ns + 5j + 2 + t
                //        - sqrt((5ns - 5j - 2 - t)^2 + 4(5ns - 5j - 2t))) / 2
                let w = five * nf * s - five * jf;
                let b = -w + two + t;
                let disc = (w - two - t) * (w - two - t) + four * (w - two * t);
                let t_star2 = (b - disc.max(T::zero()).sqrt()) / two;
                self.hs[(j - 1) as usize].eval(&[y, clamp01(t_star2)])
            }
        }
    }

    /// The extension as an arity-3 map `(y, t, s) -> X`.
    pub fn as_path_map(&self) -> PathMap<T> {
        let this = self.clone();
        PathMap::new(self.space.clone(), 3, Boundary::Free, move |p: &[T]| {
            this.eval(p[0], p[1], p[2])
        })
        .expect("arity 3 free map is valid")
    }
}

fn clamp01<T: Real>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}

/// Transports a local section of the based evaluation fibration through a
/// homotopy equivalence. `fwd`/`bwd` are the comparison maps, `homotopy` is
/// `H : X x I -> X` with `H(x,0) = x` and `H(x,1) = bwd(fwd(x))`, `phi` is a
/// path from `fwd(basepoint)` to the target basepoint, and `section` assigns
/// to a waypoint tuple downstairs a based path hitting it.
pub struct SectionTransport<T: Real> {
    space: ModelSpace,
    section: Arc<dyn Fn(&WaypointTuple<T>) -> PathMap<T> + Send + Sync>,
    fwd: Arc<dyn Fn(&Point<T>) -> Point<T> + Send + Sync>,
    bwd: Arc<dyn Fn(&Point<T>) -> Point<T> + Send + Sync>,
    homotopy: Arc<dyn Fn(&Point<T>, T) -> Point<T> + Send + Sync>,
    phi: PathMap<T>,
    n: u32,
}

#[allow(clippy::too_many_arguments)]
pub fn transport_section<T: Real>(
    space: ModelSpace,
    section: impl Fn(&WaypointTuple<T>) -> PathMap<T> + Send + Sync + 'static,
    fwd: impl Fn(&Point<T>) -> Point<T> + Send + Sync + 'static,
    bwd: impl Fn(&Point<T>) -> Point<T> + Send + Sync + 'static,
    homotopy: impl Fn(&Point<T>, T) -> Point<T> + Send + Sync + 'static,
    phi: PathMap<T>,
    n: u32,
) -> Result<SectionTransport<T>, PathError> {
    if n < 1 {
        return Err(PathError::BadN { what: "transport_section", min: 1, n });
    }
    if phi.arity() != 1 {
        return Err(PathError::BadArity(phi.arity()));
    }
    let x0 = space.basepoint::<T>();
    let d = phi
        .space()
        .dist(&phi.at(T::zero()), &fwd(&x0))
        .to_f64()
        .unwrap_or(f64::NAN);
    if !(d <= REPARAM_TOL) {
        return Err(PathError::Precondition(format!(
            "phi(0) is {d:.3e} away from fwd(basepoint) (tolerance {REPARAM_TOL:.1e})"
        )));
    }
    let d0 = space.dist(&homotopy(&x0, T::zero()), &x0).to_f64().unwrap_or(f64::NAN);
    if !(d0 <= LIFT_TOL) {
        return Err(PathError::Precondition(format!(
            "H(x0, 0) is {d0:.3e} away from x0 (tolerance {LIFT_TOL:.1e})"
        )));
    }
    Ok(SectionTransport {
        space,
        section: Arc::new(section),
        fwd: Arc::new(fwd),
        bwd: Arc::new(bwd),
        homotopy: Arc::new(homotopy),
        phi,
        n,
    })
}

impl<T: Real> SectionTransport<T> {
    pub fn n(&self) -> u32 {
        self.n
    }

    /// The transported section at one waypoint tuple: a based path whose
    /// band `[i/n, (i+1)/n]` parks at `x_i`, replays the downstairs section
    /// through `bwd`, and parks at `x_(i+1)`; the first band additionally
    /// runs the basepoint homotopy and the connecting path `phi`.
    pub fn apply(&self, tuple: &WaypointTuple<T>) -> Result<PathMap<T>, PathError> {
        if tuple.len() != self.n as usize {
            return Err(PathError::TupleLen { got: tuple.len(), want: self.n as usize });
        }
        for (i, x) in tuple.points.iter().enumerate() {
            let d = self
                .space
                .dist(&(self.homotopy)(x, T::zero()), x)
                .to_f64()
                .unwrap_or(f64::NAN);
            if !(d <= LIFT_TOL) {
                return Err(PathError::Precondition(format!(
                    "H(x_{}, 0) is {d:.3e} away from x_{} (tolerance {LIFT_TOL:.1e})",
                    i + 1,
                    i + 1
                )));
            }
        }
        let downstairs = WaypointTuple::new(
            tuple.points.iter().map(|x| (self.fwd)(x)).collect(),
        );
        let sigma = (self.section)(&downstairs);
        let n = self.n;
        let nf = real::<T>(n as f64);
        let points = tuple.points.clone();
        let x0 = self.space.basepoint::<T>();
        let bwd = Arc::clone(&self.bwd);
        let homotopy = Arc::clone(&self.homotopy);
        let phi = self.phi.clone();
        PathMap::new(self.space.clone(), 1, Boundary::Based, move |params: &[T]| {
            let t = clamp01(params[0]);
            let mut band = (t * nf).floor().to_i64().unwrap_or(0).max(0) as u32;
            if band > n - 1 {
                band = n - 1;
            }
            let three = real::<T>(3.0);
            let four = real::<T>(4.0);
            if band == 0 {
                let u = four * nf * t;
                if u <= T::one() {
                    homotopy(&x0, clamp01(u))
                } else if u <= real::<T>(2.0) {
                    bwd(&phi.at(clamp01(u - T::one())))
                } else if u <= three {
                    // (bwd . sigma)(4t - 2/n)
                    let arg = four * t - real::<T>(2.0) / nf;
                    bwd(&sigma.at(clamp01(arg)))
                } else {
                    homotopy(&points[0], clamp01(four - u))
                }
            } else {
                let i = band;
                let ifl = real::<T>(i as f64);
                let v = three * nf * t - three * ifl;
                if v <= T::one() {
                    homotopy(&points[(i - 1) as usize], clamp01(v))
                } else if v <= real::<T>(2.0) {
                    // (bwd . sigma)(3t - (2i+1)/n)
                    let arg = three * t - (real::<T>(2.0) * ifl + T::one()) / nf;
                    bwd(&sigma.at(clamp01(arg)))
                } else {
                    homotopy(&points[i as usize], clamp01(three - v))
                }
            }
        })
    }
}
