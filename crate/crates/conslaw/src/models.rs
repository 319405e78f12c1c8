//! Example models shipped with the library.

use crate::model_io::{parse_model_named, OdeModel};

/// Names and sources of the bundled models.
pub const BUNDLED: &[(&str, &str)] = &[
    ("biomd629", include_str!("../models/biomd629.model")),
    ("cgs_linear", include_str!("../models/cgs_linear.model")),
    ("cgs_pair", include_str!("../models/cgs_pair.model")),
    ("competition", include_str!("../models/competition.model")),
    ("cross_feed", include_str!("../models/cross_feed.model")),
    ("decay_product", include_str!("../models/decay_product.model")),
    ("degenerate_line", include_str!("../models/degenerate_line.model")),
    ("heterodimer", include_str!("../models/heterodimer.model")),
    ("michaelis_menten", include_str!("../models/michaelis_menten.model")),
    ("rank_deficient_crn", include_str!("../models/rank_deficient_crn.model")),
    ("volpert", include_str!("../models/volpert.model")),
];

/// Parses a bundled model by name.
pub fn bundled(name: &str) -> Option<OdeModel> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(n, text)| parse_model_named(text, n).expect("bundled models parse"))
}
