//! Mode algebra of W-algebras on the vacuum Verma module.

mod engine;
pub mod presets;
mod ppoly;
mod spec;
mod state;

pub use engine::{ChannelPolicy, Engine, OperatorSum, Schedule};
pub use ppoly::{a_coeff, channel_coefficient, p_poly};
pub use spec::{load_spec, AlgebraSpec, FieldExpr, FieldId, FieldInfo};
pub use state::{canonical_words, convert_index, is_canonical, word_weight, IndexDirection, Mode, State, Word};
