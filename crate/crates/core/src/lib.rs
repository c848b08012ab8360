pub mod exactla;
pub mod exterior;
pub mod format;
pub mod graded;
pub mod torus;
pub mod verifier;
