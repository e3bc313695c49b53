//! Classify the sections of GitHub README files into content categories.
//!
//! The pipeline parses a README into heading-delimited [`markdown::Section`]s,
//! turns each into TF-IDF and heuristic features ([`features`]), and scores
//! it with one binary classifier per [`Category`] ([`classifier`]).
//! [`evaluation`] cross-validates the pipeline, [`rules`] mines association
//! rules over label sets and [`badge`] writes predicted labels back into a
//! README.

pub mod badge;
pub mod category;
pub mod classifier;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod features;
pub mod markdown;
pub mod rng;
pub mod rules;
pub mod scalar;
pub mod sparse;

pub use category::{Category, Code};
pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Model = classifier::TrainedModel<f64>;
pub type Model32 = classifier::TrainedModel<f32>;
pub type Vocab = features::Vocabulary<f64>;
pub type Prediction = classifier::Prediction<f64>;
pub type Features = features::FeatureVector<f64>;
