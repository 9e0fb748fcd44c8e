//! Map tables for serialized systems.

use std::sync::Arc;

use crate::ifs::MapTable;
use crate::shark_teeth::FreeArcSpace;
use crate::{dendrite, shark_teeth, snake};

/// Every named map that needs no construction-time data: the snake map and
/// its cover pieces, the dendrite maps and the tent contractions.
pub fn standard_table() -> MapTable {
    let mut table = MapTable::new();
    snake::register_maps(&mut table);
    dendrite::register_maps(&mut table);
    shark_teeth::register_tent_maps(&mut table);
    table
}

/// [`standard_table`] plus the free-arc maps of `space`.
pub fn table_with_free_arc(space: Arc<FreeArcSpace>) -> MapTable {
    let mut table = standard_table();
    shark_teeth::register_maps(&mut table, space);
    table
}
