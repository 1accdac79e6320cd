//! Command dispatch and reports (populated later).
pub fn main_entry() -> i32 {
    0
}
