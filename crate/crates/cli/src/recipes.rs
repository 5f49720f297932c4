//! Named reproduction recipes. Each one fixes the command and every choice
//! the experiment leaves open; config files and flags may still override.

use clap::ValueEnum;
use fraglab::dynamics::TimeWindow;
use fraglab::sliomstats::ScalingKind;
use serde::{Deserialize, Serialize};

use crate::config::{Model, PostselectSpec, RunConfig};
use crate::Command;

/// Z₅ order, the first probed fragment of the 16-atom `N_c = 5` sector.
pub const Z5: &str = "rggggrggggrggggr";
pub const Z3: &str = "rggrggrggrggrggr";
/// Two boundary clusters of seven charges around a short central one.
pub const BOUNDARY_CLUSTERS: &str = "ggggggrggrgggggg";

/// One initial state per probed fragment of the 16-atom `N_c = 5` sector;
/// the remaining six fragments are their mirror images.
pub const SECTOR5_STATES: [&str; 10] = [
    Z5,
    "rgggggrggrgggggr",
    "rgggggrgggrggggr",
    "grggggrggrggggrg",
    "grggggrggggrgggr",
    "grggggrgggrggggr",
    "grgggrggggrggggr",
    "grgggrggggrgggrg",
    "grgggrgggggrggrg",
    "grgggrgggggrgggr",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Recipe {
    /// Z₅ autocorrelators under the gauge-theory Hamiltonian.
    #[value(name = "fig2a-lgt")]
    #[serde(rename = "fig2a-lgt")]
    Fig2aLgt,
    /// Z₅ autocorrelators under PXQ + QXP.
    #[value(name = "fig2a-pxq")]
    #[serde(rename = "fig2a-pxq")]
    Fig2aPxq,
    /// Microstate projections of a 45-state fragment under full Rydberg dynamics.
    Fig2b,
    /// Spreading of two boundary clusters.
    Fig3a,
    /// The frozen Z₃ state.
    Fig3b,
    /// Sector ensemble with readout noise and cluster-count post-selection.
    Fig4b,
    /// Sector ensemble with perfect readout.
    Fig4c,
    /// Bulk and boundary width scaling.
    Fig4d,
    /// Fragment census and its growth with chain length.
    Ext6,
    /// Centre-cluster scaling, collapse and peak ratio.
    Ext7,
    /// Projections with and without position disorder.
    Ext8,
    /// Readout noise without cluster-count post-selection.
    Ext9,
}

fn long_window() -> TimeWindow {
    TimeWindow {
        omega_t_start: 0.0,
        omega_t_end: 20.0,
        n_steps: 201,
    }
}

impl Recipe {
    pub fn command(self) -> Command {
        use Recipe::*;
        match self {
            Fig2aLgt | Fig2aPxq | Fig2b | Fig3a | Fig3b | Ext8 => Command::Quench,
            Fig4b | Fig4c | Ext9 => Command::Ensemble,
            Fig4d | Ext7 => Command::Scaling,
            Ext6 => Command::Fragments,
        }
    }

    pub fn config(self) -> RunConfig {
        use Recipe::*;
        let base = RunConfig {
            recipe: Some(self),
            n_atoms: Some(16),
            ..RunConfig::default()
        };
        let sector_ensemble = RunConfig {
            model: Model::Lgt,
            initial_states: SECTOR5_STATES.iter().map(|s| s.to_string()).collect(),
            sector: 5,
            // 19 steps × 200 shots = 3800 snapshots per fragment.
            shots: 200,
            ..base.clone()
        };
        match self {
            Fig2aLgt | Fig2aPxq => RunConfig {
                model: if self == Fig2aLgt { Model::Lgt } else { Model::Pxq },
                init: Some(Z5.into()),
                window: long_window(),
                average_from: 4.0,
                ..base
            },
            Fig2b => RunConfig {
                model: Model::Ryd,
                init: Some(SECTOR5_STATES[5].into()),
                ..base
            },
            Fig3a => RunConfig {
                init: Some(BOUNDARY_CLUSTERS.into()),
                window: long_window(),
                ..base
            },
            Fig3b => RunConfig {
                init: Some(Z3.into()),
                window: long_window(),
                ..base
            },
            Fig4b => RunConfig {
                spam: true,
                prep_errors: true,
                postselect: PostselectSpec {
                    blockade: true,
                    nc: Some(5),
                },
                ..sector_ensemble
            },
            Fig4c => sector_ensemble,
            Ext9 => RunConfig {
                spam: true,
                prep_errors: true,
                postselect: PostselectSpec {
                    blockade: true,
                    nc: None,
                },
                ..sector_ensemble
            },
            Fig4d => RunConfig {
                scaling: vec![ScalingKind::Bulk, ScalingKind::Boundary],
                n_list: (50..=200).step_by(10).collect(),
                ..base
            },
            Ext7 => RunConfig {
                scaling: vec![ScalingKind::Center],
                n_list: (90..=450).step_by(10).collect(),
                collapse: vec![150, 250, 350, 450],
                peak_n: Some(550),
                ..base
            },
            Ext6 => RunConfig {
                sector: 5,
                n_list: (10..=40).collect(),
                ..base
            },
            Ext8 => RunConfig {
                model: Model::Disordered,
                init: Some(SECTOR5_STATES[6].into()),
                ..base
            },
        }
    }
}
