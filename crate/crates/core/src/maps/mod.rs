mod extension;
mod families;
mod homotopy;
mod path;
mod sample;
mod winding;

pub use extension::{dugundji_extend, glue_homotopy_extension, small_diameter_extend};
pub use families::{
    example_family, explicit_extension, ndagger_eclosed_family, pathcomp_family, FamilyName,
    MapFamily, Member,
};
pub use homotopy::{
    cone_contraction, equiconnect_homotopy, homotopy_between, homotopy_between_on, time_grid,
    Homotopy, HomotopyMode, DEFAULT_TIME_EXPONENT,
};
pub use sample::{restrict, MapSample};
pub use winding::{collapse_retraction, winding_number};

pub(crate) use extension::{dugundji_values, dugundji_values_many, net_lipschitz};
