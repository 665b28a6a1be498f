//! Discrete counterparts of the local estimates: Hardy and interpolation
//! inequalities, cutoffs, mollifiers, the iteration lemma, Caccioppoli ratios
//! and weighted derivative classes.

pub mod caccioppoli;
pub mod cutoff;
pub mod hardy;
pub mod interpolation;
pub mod iteration;
pub mod mollifier;
pub mod report;
pub mod weighted;

pub use caccioppoli::{caccioppoli_report, caccioppoli_rows, higher_derivative_ratios, CaccioppoliRow};
pub use cutoff::{build_cutoff, CutoffFunction};
pub use hardy::hardy_ratio;
pub use interpolation::{dirichlet_energy, interpolation_check};
pub use iteration::{iteration_lemma_check, IterationLemmaInput, IterationLemmaResult};
pub use mollifier::{mollifier_degree_check, mollifier_derivative_bound, Lattice2, MollifierKernel};
pub use report::{EstimateReport, Metric, Table};
pub use weighted::{trend, weighted_class_report, Trend, WeightedClass};
