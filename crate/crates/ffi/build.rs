use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("manifest dir"));
    println!("cargo:rerun-if-changed=src/lib.rs");

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        cpp_compat: true,
        include_guard: Some("BOHR_H".to_string()),
        documentation: true,
        header: Some(
            "/* C interface to the bohr exact quantum-logic library.\n\
             * All structured data crosses this boundary as JSON text in the\n\
             * same encodings the `bohr` command line uses. */"
                .to_string(),
        ),
        enumeration: cbindgen::EnumConfig {
            prefix_with_name: true,
            ..Default::default()
        },
        ..Default::default()
    };

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("ABI header generation")
        .write_to_file(crate_dir.join("include").join("bohr.h"));
}
