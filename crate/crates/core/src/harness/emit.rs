//! CSV and Markdown output for experiment rows.

use std::io::Write;

use super::experiment::ResultRow;
use crate::error::Result;

pub const CSV_HEADER: [&str; 12] = [
    "material",
    "epsilon",
    "trial",
    "true_lambda",
    "lo21",
    "hi21",
    "lo24",
    "hi24",
    "lo25",
    "hi25",
    "nested",
    "contained",
];

fn fixed(v: f64) -> String {
    format!("{v:.8}")
}

/// One header line plus one line per row, LF-terminated, floats with eight
/// decimals.
pub fn emit_csv<W: Write>(rows: &[ResultRow], dest: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(dest);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.material.clone(),
            fixed(r.epsilon),
            r.trial.to_string(),
            fixed(r.true_lambda),
            fixed(r.lo21),
            fixed(r.hi21),
            fixed(r.lo24),
            fixed(r.hi24),
            fixed(r.lo25),
            fixed(r.hi25),
            r.nested.to_string(),
            r.contained.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn eps_label(eps: f64) -> String {
    if eps == 0.0 {
        "0".into()
    } else if eps == 1.0 {
        "1".into()
    } else {
        format!("{eps:e}")
    }
}

/// One table per material and trial: ε across, the true value and the three
/// bounds down, with an upper-bound and a lower-bound section.
pub fn emit_markdown<W: Write>(rows: &[ResultRow], mut dest: W) -> Result<()> {
    if rows.is_empty() {
        writeln!(dest, "_No results._")?;
        return Ok(());
    }
    let mut groups: Vec<((&str, usize), Vec<&ResultRow>)> = Vec::new();
    for r in rows {
        let key = (r.material.as_str(), r.trial);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, g)) => g.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    let multi_trial = rows.iter().any(|r| r.trial > 0);

    for (i, ((material, trial), group)) in groups.iter().enumerate() {
        if i > 0 {
            writeln!(dest)?;
        }
        if multi_trial {
            writeln!(dest, "### {material} (trial {trial})")?;
        } else {
            writeln!(dest, "### {material}")?;
        }
        writeln!(dest)?;
        let head: Vec<String> = group.iter().map(|r| eps_label(r.epsilon)).collect();
        writeln!(dest, "| ε | | {} |", head.join(" | "))?;
        writeln!(dest, "|---|---|{}", "---:|".repeat(group.len()))?;

        type Pick = fn(&ResultRow) -> f64;
        let sections: [(&str, [(&str, Pick); 4]); 2] = [
            (
                "upper",
                [
                    ("TRUE", |r| r.true_lambda),
                    ("additive", |r| r.hi21),
                    ("spectral", |r| r.hi24),
                    ("quadratic", |r| r.hi25),
                ],
            ),
            (
                "lower",
                [
                    ("TRUE", |r| r.true_lambda),
                    ("additive", |r| r.lo21),
                    ("spectral", |r| r.lo24),
                    ("quadratic", |r| r.lo25),
                ],
            ),
        ];
        for (section, lines) in sections {
            for (label, pick) in lines {
                let cells: Vec<String> = group.iter().map(|r| fixed(pick(r))).collect();
                writeln!(dest, "| {section} | {label} | {} |", cells.join(" | "))?;
            }
        }
    }
    Ok(())
}
