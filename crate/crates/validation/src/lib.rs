//! Holds the `acceptance` test target, which checks the library and the
//! `kex` harness together. Run it last: it fails without benchmark data.
