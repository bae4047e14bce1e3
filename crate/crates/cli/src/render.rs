//! Aligned-column text output.

use std::fmt::Write;

use surfaut_core::classifier::{ClassificationReport, Slot};

use crate::document::{BdfOutput, ChainOutput, ClassifyOutput, CommandOutput, OrbifoldOutput};

pub fn render(out: &CommandOutput, verbose: bool) -> String {
    let mut s = String::new();
    match out {
        CommandOutput::Classify(c) => classify(&mut s, c, verbose),
        CommandOutput::ClassifyBatch(items) => {
            for item in items {
                let _ = writeln!(s, "== {} ==", item.source);
                match (&item.output, &item.error) {
                    (Some(c), _) => classify(&mut s, c, verbose),
                    (None, Some(e)) => {
                        let _ = writeln!(s, "error (exit {}): {e}", item.exit_code);
                    }
                    (None, None) => {}
                }
                s.push('\n');
            }
        }
        CommandOutput::Orbifold(o) => orbifold(&mut s, o, verbose),
        CommandOutput::Bdf(b) => bdf(&mut s, b, verbose),
        CommandOutput::BlowupChain(c) => chain(&mut s, c, verbose),
    }
    s
}

fn table(s: &mut String, rows: &[[String; 3]]) {
    let w0 = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
    let w1 = rows.iter().map(|r| r[1].chars().count()).max().unwrap_or(0);
    for r in rows {
        let pad = w1 - r[1].chars().count();
        let line = format!("{:<w0$}  {}{}  {}", r[0], r[1], " ".repeat(pad), r[2]);
        let _ = writeln!(s, "{}", line.trim_end());
    }
}

fn classify(s: &mut String, c: &ClassifyOutput, verbose: bool) {
    let _ = writeln!(s, "surface: {}", c.report.surface);
    ladder(s, &c.report);
    if verbose && !c.report.details.is_empty() {
        let _ = writeln!(s, "details:");
        for d in &c.report.details {
            let json = serde_json::to_string_pretty(d).expect("details serialize");
            for line in json.lines() {
                let _ = writeln!(s, "  {line}");
            }
        }
    }
}

fn ladder(s: &mut String, r: &ClassificationReport) {
    let mut rows = vec![["slot".to_string(), "value".to_string(), "rules".to_string()]];
    for slot in Slot::ALL {
        let e = r.ladder.get(slot);
        rows.push([slot.label().to_string(), e.value.to_string(), e.rules.join(", ")]);
    }
    table(s, &rows);
    if !r.flags.is_empty() {
        let _ = writeln!(s, "flags: {}", r.flags.join(", "));
    }
    if !r.rules_applied.is_empty() {
        let _ = writeln!(s, "rules:");
        let w = r.rules_applied.iter().map(|c| c.rule.len()).max().unwrap_or(0);
        for c in &r.rules_applied {
            let _ = writeln!(s, "  {:<w$}  {}", c.rule, c.anchor);
        }
    }
    if !r.notes.is_empty() {
        let _ = writeln!(s, "notes:");
        for n in &r.notes {
            let _ = writeln!(s, "  {n}");
        }
    }
}

fn orbifold(s: &mut String, o: &OrbifoldOutput, verbose: bool) {
    let _ = writeln!(s, "signature:      {}", o.signature);
    let _ = writeln!(s, "abelianization: {}", o.abelianization_text);
    if let Some(sw) = &o.swap {
        let _ = writeln!(s, "swap ({}, {}):    {} (base genus {})", sw.i, sw.j, sw.verdict, sw.base_genus);
        let _ = writeln!(s, "identified:     {}", sw.classes_identified);
        if verbose {
            if let Some(id) = &sw.identification {
                let _ = writeln!(s, "certificate:    {}", serde_json::to_string(id).expect("serializes"));
            }
        }
    }
}

fn bdf(s: &mut String, b: &BdfOutput, verbose: bool) {
    let _ = writeln!(s, "type:     {}", b.type_index);
    let _ = writeln!(s, "curve:    {}", b.curve);
    if let Some(e) = &b.epsilon {
        let _ = writeln!(s, "epsilon:  {e}");
    }
    let _ = writeln!(s, "N_G/G:    {} (order {})", b.quotient_text, b.order);
    let _ = writeln!(s, "maximum:  {}", if b.maximum_attained { "attained (12)" } else { "not attained" });
    if verbose {
        if let Some(n) = &b.normalizer {
            let _ = writeln!(s, "level:    {} (|G| = {}, normalizer order {})", n.level, n.group_order, n.normalizer_order);
            let _ = writeln!(s, "cosets:");
            for c in &n.coset_representatives {
                let _ = writeln!(s, "  {c}");
            }
        }
    }
}

fn chain(s: &mut String, c: &ChainOutput, verbose: bool) {
    let _ = writeln!(s, "n:             {}", c.n);
    let _ = writeln!(s, "point:         {}", serde_json::to_value(c.point).expect("serializes").as_str().unwrap_or(""));
    let _ = writeln!(s, "final weights: ({}, {})", c.final_weights.weight_u, c.final_weights.weight_v);
    let _ = writeln!(s, "stabilizer:    {}", c.stabilizer);
    let _ = writeln!(s, "conclusion:    {}", c.conclusion);
    if verbose {
        if let Some(ws) = &c.weights {
            let _ = writeln!(s, "chain:");
            for (k, w) in ws.iter().enumerate() {
                let _ = writeln!(s, "  {k:>3}  ({}, {})", w.weight_u, w.weight_v);
            }
        }
    }
}
