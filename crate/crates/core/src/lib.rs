pub mod functions;
pub mod linalg;
pub mod mbasis;
pub mod ordinal;
pub mod report;
pub mod space;
pub mod verifier;

pub use functions::{AtomicMeasure, FunctionError, Scalar, StepFunction};
pub use mbasis::{BasisError, BasisPair, Reconstruction, XiClause, XiRule};
pub use ordinal::{CardClass, CofClass, Ordinal, OrdinalError};
pub use report::{Case, Report, Summary};
pub use space::{
    AdmissibleSet, ClosurePolicy, CopySel, EdgeId, PointAddr, ScaffoldTree, SpaceError, SpaceSpec,
};
pub use verifier::{SuiteConfig, VerifyError};
