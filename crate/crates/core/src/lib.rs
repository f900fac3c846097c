//! Time-varying stock-market integration and structural breaks.
//!
//! The library estimates the degree of integration of a national stock
//! market into the world market from a partially segmented conditional
//! international CAPM with bivariate GARCH covariance dynamics (QML),
//! then locates multiple mean shifts in the resulting integration path
//! by least-squares segmentation with the associated test battery.
//!
//! Pipeline: [`data`] ingests monthly panels and builds information
//! sets, [`icapm`] holds the model and its likelihood filter,
//! [`estimate`] runs QML with robust inference, [`breaks`] performs the
//! segmentation and tests, [`simulate`] provides synthetic generators,
//! and [`report`] shapes results for export.

pub mod breaks;
pub mod data;
pub mod estimate;
pub mod icapm;
pub mod report;
pub mod simulate;
pub mod stats;
