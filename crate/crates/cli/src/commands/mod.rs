pub mod analyze;
pub mod classify;
pub mod consolidate;
pub mod corpus;
pub mod evaluate;
pub mod ingest;
pub mod io;
pub mod kappa;
pub mod preprocess;
