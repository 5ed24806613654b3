//! Parse a model document, report located errors, and print it back canonically.

use gencx::document::parse_model;

const TEXT: &str = r#"
[generator.e1]
grade = "R"

[generator.e2]
grade = "R"

[generator.e3]
grade = "R"

[generator.e4]
grade = "R"
diff = "e1^e2"

[form.w]
expr = "e1^e3 + e2^e4"

[gcs]
omega = "w"
"#;

fn main() -> gencx::Result<()> {
    let doc = parse_model(TEXT)?;
    println!("generators: {:?}", doc.model.names());
    println!("rho = {}", doc.rho()?);
    print!("{}", doc.print());

    let broken = TEXT.replace("e1^e2\"", "e1\"");
    match parse_model(&broken) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => println!("unexpectedly accepted"),
    }
    Ok(())
}
