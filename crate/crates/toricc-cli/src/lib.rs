//! Command-line surface of the toric-code encoder compiler: circuit export,
//! SVG rendering and the `toricc` subcommands.

pub mod app;
pub mod error;
pub mod export;
pub mod render;

pub use app::{run, run_with};
pub use error::{CliError, CliResult};
pub use export::{circuit_from_json, circuit_to_json, encoder_from_stim, encoder_to_stim};
pub use render::{render_final_form_svg, render_layers_svg};
