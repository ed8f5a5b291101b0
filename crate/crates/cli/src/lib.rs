//! Command-line front end for `mdepth`: CSV and JSON I/O, SVG plots and the
//! `mdepth` subcommands.

pub mod cli;
pub mod error;
pub mod io;
pub mod output;
pub mod svg;

pub use cli::run;
pub use error::{CliError, CliResult};
pub use svg::{write_region_svg, write_regions_svg};
