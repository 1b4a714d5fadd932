//! Prints the canonical serialization of the iterated-gluing strong
//! connection on the quantum sphere (the value at the group-like
//! generator), as consumed by `hopfglue example-s2rt --expect`.

fn main() {
    let (_, ell) = hopfglue_core::toeplitz::method_one().expect("transfer data verifies");
    println!("{}", hopfglue_core::toeplitz::connection_to_json(&ell));
}
