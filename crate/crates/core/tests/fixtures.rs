use std::path::PathBuf;

use galdef::templates::fixtures;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

// Set GALDEF_BLESS=1 to rewrite the bundled files.
#[test]
fn bundled_fixtures_match_templates() {
    let bless = std::env::var_os("GALDEF_BLESS").is_some();
    for (name, s) in fixtures() {
        let path = dir().join(format!("{name}.json"));
        let want = s.to_json_string();
        if bless {
            std::fs::write(&path, &want).unwrap();
        }
        let got = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn no_stray_fixtures() {
    let names: Vec<String> = fixtures().into_iter().map(|(n, _)| format!("{n}.json")).collect();
    for e in std::fs::read_dir(dir()).unwrap() {
        let f = e.unwrap().file_name().into_string().unwrap();
        assert!(names.contains(&f), "{f}");
    }
}
