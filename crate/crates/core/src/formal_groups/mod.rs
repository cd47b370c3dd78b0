//! `p`-typical formal group laws: the universal law from its logarithm,
//! pushforwards such as the Honda and Johnson–Wilson laws, `p`-series, formal
//! sums and strict isomorphism series.

mod cache;
mod law;
mod log;
mod series;

pub use cache::{cached_universal, series_bytes, LawCache, CACHE_DIR_ENV};
pub use law::{
    honda_law, johnson_wilson_law, pushforward_universal, strict_iso_series, universal_pushforward,
    FGLaw, Provenance,
};
pub use log::{bp_generators, bp_log, fgl_from_log, log_depth, universal_law, LogSeries, Scheme};
pub use series::{BiSeries, SeriesFile, SeriesTerm, TruncSeries, SERIES_SCHEMA};
