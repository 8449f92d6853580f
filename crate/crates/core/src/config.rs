//! Experiment configuration (stub).
