fn main() {
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR");
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    // Regenerate the committed header.  A generation failure downgrades to a
    // warning so that builds without the generator environment still work
    // from the committed copy.
    match cbindgen::generate(&crate_dir) {
        Ok(bindings) => {
            bindings.write_to_file(format!("{crate_dir}/include/gmzv.h"));
        }
        Err(err) => {
            println!("cargo:warning=header generation skipped: {err}");
        }
    }
}
