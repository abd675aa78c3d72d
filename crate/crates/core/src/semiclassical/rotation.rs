/// Total rotation angle above which the second-order expansion is flagged.
pub const SMALL_ANGLE_LIMIT: f64 = 0.3;

/// Expectation values `(S₀, Sx, Sy, Sz)` of the Stokes operators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StokesVector {
    pub s0: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

impl StokesVector {
    pub fn new(s0: f64, sx: f64, sy: f64, sz: f64) -> Self {
        StokesVector { s0, sx, sy, sz }
    }

    /// Unit-intensity linear polarization at angle `angle` from the lab x axis.
    pub fn linear(angle: f64) -> Self {
        let (s, c) = (2.0 * angle).sin_cos();
        StokesVector { s0: 1.0, sx: c, sy: s, sz: 0.0 }
    }

    pub fn x_polarized() -> Self {
        StokesVector { s0: 1.0, sx: 1.0, sy: 0.0, sz: 0.0 }
    }

    /// Length of `(Sx, Sy, Sz)`.
    pub fn polarization_norm(&self) -> f64 {
        (self.sx * self.sx + self.sy * self.sy + self.sz * self.sz).sqrt()
    }

    fn vector(&self) -> [f64; 3] {
        [self.sx, self.sy, self.sz]
    }

    fn with_vector(&self, v: [f64; 3]) -> Self {
        StokesVector { s0: self.s0, sx: v[0], sy: v[1], sz: v[2] }
    }
}

/// Rotation generator `γ⃗` in radians.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct GammaVector {
    pub gx: f64,
    pub gy: f64,
    pub gz: f64,
}

impl GammaVector {
    pub fn new(gx: f64, gy: f64, gz: f64) -> Self {
        GammaVector { gx, gy, gz }
    }

    pub fn norm(&self) -> f64 {
        (self.gx * self.gx + self.gy * self.gy + self.gz * self.gz).sqrt()
    }

    pub fn scaled(&self, k: f64) -> Self {
        GammaVector { gx: k * self.gx, gy: k * self.gy, gz: k * self.gz }
    }

    fn vector(&self) -> [f64; 3] {
        [self.gx, self.gy, self.gz]
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Rotates `(Sx, Sy, Sz)` by angle `|γ|` about `-γ̂`, so that a generator
/// along z carries `Sx` into `-Sy`. `S₀` is untouched.
pub fn rotate_stokes_exact(s: StokesVector, g: GammaVector) -> StokesVector {
    let angle = g.norm();
    if angle == 0.0 {
        return s;
    }
    let n = g.vector().map(|c| c / angle);
    let v = s.vector();
    let (sin, cos) = angle.sin_cos();
    let nxv = cross(n, v);
    let ndv = dot(n, v);
    let out = [0, 1, 2].map(|k| v[k] * cos - nxv[k] * sin + n[k] * ndv * (1.0 - cos));
    s.with_vector(out)
}

/// Second-order expansion of [`rotate_stokes_exact`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SmallAngleRotation {
    pub stokes: StokesVector,
    /// Set when `|γ| ≥ SMALL_ANGLE_LIMIT`.
    pub beyond_limit: bool,
}

/// `S' ≈ S − γ×S + (γ(γ·S) − γ²S)/2`.
pub fn rotate_stokes_small(s: StokesVector, g: GammaVector) -> SmallAngleRotation {
    let gv = g.vector();
    let v = s.vector();
    let gxv = cross(gv, v);
    let gdv = dot(gv, v);
    let g2 = dot(gv, gv);
    let out = [0, 1, 2].map(|k| v[k] - gxv[k] + 0.5 * (gv[k] * gdv - g2 * v[k]));
    SmallAngleRotation { stokes: s.with_vector(out), beyond_limit: g2.sqrt() >= SMALL_ANGLE_LIMIT }
}
