/// In-plane constitutive assumption for the structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaneModel {
    PlaneStress,
    PlaneStrain,
}

impl PlaneModel {
    pub fn name(self) -> &'static str {
        match self {
            PlaneModel::PlaneStress => "plane-stress",
            PlaneModel::PlaneStrain => "plane-strain",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "plane-stress" => Some(PlaneModel::PlaneStress),
            "plane-strain" => Some(PlaneModel::PlaneStrain),
            _ => None,
        }
    }
}

/// Isotropic linear elastic solid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructureMaterial {
    /// kg/m³
    pub density: f64,
    /// N/m²
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    pub model: PlaneModel,
}

impl StructureMaterial {
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.density > 0.0 && self.density.is_finite()) {
            v.push("density must be positive".into());
        }
        if !(self.youngs_modulus > 0.0 && self.youngs_modulus.is_finite()) {
            v.push("youngs_modulus must be positive".into());
        }
        if !(self.poisson_ratio > -1.0 && self.poisson_ratio < 0.5) {
            v.push("poisson_ratio must lie in (-1, 0.5)".into());
        }
        v
    }

    pub fn shear_modulus(&self) -> f64 {
        self.youngs_modulus / (2.0 * (1.0 + self.poisson_ratio))
    }

    pub fn bulk_modulus(&self) -> f64 {
        self.youngs_modulus / (3.0 * (1.0 - 2.0 * self.poisson_ratio))
    }

    pub fn pressure_wave_speed(&self) -> f64 {
        ((self.bulk_modulus() + 4.0 * self.shear_modulus() / 3.0) / self.density).sqrt()
    }

    pub fn shear_wave_speed(&self) -> f64 {
        (self.shear_modulus() / self.density).sqrt()
    }

    /// Voigt matrix relating (σxx, σyy, σxy) to (εxx, εyy, γxy).
    pub fn elasticity_matrix(&self) -> [[f64; 3]; 3] {
        let (e, nu) = (self.youngs_modulus, self.poisson_ratio);
        match self.model {
            PlaneModel::PlaneStress => {
                let f = e / (1.0 - nu * nu);
                [[f, f * nu, 0.0], [f * nu, f, 0.0], [0.0, 0.0, f * (1.0 - nu) / 2.0]]
            }
            PlaneModel::PlaneStrain => {
                let f = e / ((1.0 + nu) * (1.0 - 2.0 * nu));
                [[f * (1.0 - nu), f * nu, 0.0], [f * nu, f * (1.0 - nu), 0.0], [0.0, 0.0, f * (1.0 - 2.0 * nu) / 2.0]]
            }
        }
    }
}

/// Inviscid acoustic fluid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidMaterial {
    /// kg/m³
    pub density: f64,
    /// N/m²
    pub bulk_modulus: f64,
}

impl FluidMaterial {
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !(self.density > 0.0 && self.density.is_finite()) {
            v.push("density must be positive".into());
        }
        if !(self.bulk_modulus > 0.0 && self.bulk_modulus.is_finite()) {
            v.push("bulk_modulus must be positive".into());
        }
        v
    }

    pub fn sound_speed(&self) -> f64 {
        (self.bulk_modulus / self.density).sqrt()
    }

    pub fn impedance(&self) -> f64 {
        self.density * self.sound_speed()
    }
}
