//! Simple closed curves in normal position, admissible states and
//! quantum-trace supports, and mapping-class actions.

pub mod mcg;
pub mod normal;
pub mod states;

pub use mcg::{
    act_on_curve, check_supplied_image, image_by_search, validate_automorphism, FreeAutomorphism, FreeWord,
    MappingClass, MappingClassJson,
};
pub use normal::{closed_curves_up_to, curve_in_class, torus_curve, CornerArc, CurveJson, NormalCurve};
pub use states::{
    brute_force_states, coset_fibers, enumerate_admissible_states, injective_mod, support_bounds_check, TraceSupport,
    DEFAULT_STATE_CAP,
};
