//! Finite unitals: the Hermitian construction over GF(q²), design-axiom
//! verification, O'Nan configuration search, translation groups, isomorphism
//! search, and exhaustive checkers for Wilbrink's conditions (I)–(III).
//!
//! ```
//! use unitals::{classical_unital, find_onan, translations_with_center};
//!
//! let u = classical_unital(3).unwrap();
//! assert_eq!((u.num_points(), u.num_blocks()), (28, 63));
//! assert!(find_onan(&u).is_none());
//! assert_eq!(translations_with_center(&u, 0).len(), 3);
//! ```

pub mod automorphisms;
pub mod classical;
pub mod configurations;
pub mod field;
pub mod format;
pub mod unital;
pub mod wilbrink;

pub use automorphisms::{
    admits_all_translations, find_isomorphism, is_automorphism, is_isomorphism, is_translation,
    translations_with_center, IsoOutcome, PointPermutation,
};
pub use classical::{
    check_two_transitive, classical_unital, hermitian_form, isotropic_points, translation_matrices, xi_subgroup,
    HermitianUnital, Matrix3, ProjPoint,
};
pub use configurations::{find_onan, is_x_parallel, x_parallel_blocks, ConfigError, ONanWitness};
pub use field::{Elem, FieldError, FieldTables};
pub use format::{load_linear_space, load_unital, save_unital, FormatError, LoadMode, UnitalFile};
pub use unital::{verify_design, verify_linear_space, DesignReport, StructureKind, Unital, UnitalError, Violation, ViolationKind};
pub use wilbrink::{
    check_condition_i, check_condition_ii, check_condition_iii, check_condition_iii_auto, classify,
    ClassificationVerdict, ClassifyOptions, Condition, ConditionReport, Counterexample, Enumeration, Mode, Verdict,
    WilbrinkError,
};
