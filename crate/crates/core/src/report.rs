//! Report persistence (stub).
