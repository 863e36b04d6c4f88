mod classify;
mod count;
mod eval;
mod simulate;
mod train;

pub use classify::{classify_trace, cmd_classify, ClassifyArgs, ClassifyReport, SegmentLabel, WindowLabel};
pub use count::{cmd_count, count_trace, CountArgs, CountReport, CountSummary};
pub use eval::{cmd_eval, EvalArgs};
pub use simulate::{cmd_simulate, PresetArgs, SimulateArgs};
pub use train::{cmd_train, TrainArgs, TrainReport};
