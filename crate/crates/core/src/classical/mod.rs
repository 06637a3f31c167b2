//! Classical proper-time mechanics in units with c = m = 1 (and ħ = 1 for
//! the effective mass). `NaturalScales` converts to eV and nm.

pub mod dynamics;
pub mod effective_mass;
pub mod fields;
pub mod kinematics;
pub mod orbit;

pub use dynamics::{
    canonical_k, canonical_k_of_velocity, critical_radius, force_factor, free_hamiltonian,
    hamilton_rhs, lagrangian, momentum_of_velocity, reduced_force, velocity, CoulombModel,
    PhaseState,
};
pub use effective_mass::{
    bracket_from_b, bracket_from_u, effective_mass_along, effective_mass_from_velocity,
    scalar_derivatives, MuSample,
};
pub use fields::{retarded_fields, FieldValues, SourceEmissionState};
pub use kinematics::{
    b_inverse, b_transform, collaborative_speed, coordinate_time_along, lorentz_gamma, pt_boost,
    u_from_w, w_from_u, KinematicState,
};
pub use orbit::{integrate_orbit, OrbitConfig, Trajectory, TrajectorySample};

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;

/// Length unit ħ/mc, energy unit mc² and time unit ħ/mc².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaturalScales {
    pub length_nm: f64,
    pub energy_ev: f64,
    /// Time unit in ħ/eV.
    pub time_hbar_per_ev: f64,
}

impl NaturalScales {
    pub fn new(c: &PhysicalConstants) -> Self {
        Self {
            length_nm: c.hbar_c_ev_nm / c.mc2_ev,
            energy_ev: c.mc2_ev,
            time_hbar_per_ev: 1.0 / c.mc2_ev,
        }
    }

    pub fn length_to_nm(&self, x: f64) -> f64 {
        x * self.length_nm
    }

    pub fn nm_to_length(&self, nm: f64) -> f64 {
        nm / self.length_nm
    }

    pub fn energy_to_ev(&self, e: f64) -> f64 {
        e * self.energy_ev
    }
}
