//! Holds the `acceptance` test target; run it with `cargo test -p topoperiod-tests --test acceptance -- --nocapture`.
