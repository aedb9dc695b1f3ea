//! Bundled groups and the sporadic-group arithmetic rows.

mod groups;
mod table;

pub use groups::{bundled_names, group_spec, load_group, load_spec, GroupSpec};
pub use table::{
    check_theorem_arithmetic, constituent_order, parse_power_product, parse_rows, row,
    sporadic_minimal_lengths, stabilizer_order, table1_rows, RowReport, TheoremRow, ROWS_TEXT,
};
