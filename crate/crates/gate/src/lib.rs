//! Holds the `acceptance` test target: `cargo test -p qml-gate`.
