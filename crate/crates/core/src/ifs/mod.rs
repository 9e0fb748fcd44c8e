//! Generic (weak) IFS machinery: map evaluation, the Hutchinson operator,
//! attractor iteration, sampled Lipschitz checks and composition-diameter
//! certificates.

mod attractor;
mod certificate;
mod lipschitz;
mod map;
mod system;

pub use attractor::{
    chaos_game, hutchinson, image_points, iterate_attractor, map_label, AttractorResult,
};
pub use certificate::{
    certify_composition_diameter, max_word_diameter, word_count, CoverCertificate, WordMaximum,
    WORD_LIMIT,
};
pub use lipschitz::{
    check_weak_contraction, estimate_lipschitz, farthest_points, LipschitzReport, EXTREME_POINTS,
};
pub use map::{apply_map, exact_decimal, Affine, MapFactory, MapKind, MapSpec, MapTable, PlaneMap};
pub(crate) use map::{expect_params, int_param};
pub use system::{IfsDocument, IfsSystem, Mode};
