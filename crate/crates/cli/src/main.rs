//! softedge: finite-n Janossy kernels, Fredholm determinants and
//! Tracy-Widom edge laws for unitary invariant ensembles.

mod cache;
mod commands;
mod config;
mod expr;
mod output;

use commands::{run_command, CmdError, SCHEMAS};
use config::RunConfig;

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some(command) = args.first() else {
        eprintln!("{}", usage_text());
        return 2;
    };
    if command == "--help" || command == "-h" || command == "help" {
        println!("{}", usage_text());
        return 0;
    }
    let Some(schema) = SCHEMAS.iter().find(|s| s.command == *command) else {
        eprintln!("error: unknown command '{command}'\n\n{}", usage_text());
        return 2;
    };
    let config = match RunConfig::build(schema, &args[1..]) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("usage error: {e}");
            return 2;
        }
    };

    // cache: hit re-emits the stored bytes, miss computes and stores
    let cache = cache::Cache::open(&config);
    let key = cache::key_of(&config);
    let cached = cache.as_ref().and_then(|c| c.lookup(&key));
    let (table, summary) = match cached {
        Some(table) => (
            table,
            output::Json::Obj(vec![
                ("command".into(), output::Json::Str(config.command.clone())),
                ("cache_hit".into(), output::Json::Bool(true)),
                ("cache_key".into(), output::Json::Str(key.clone())),
            ]),
        ),
        None => {
            let out = match run_command(&config) {
                Ok(o) => o,
                Err(CmdError::Usage(e)) => {
                    eprintln!("usage error: {e}");
                    return 2;
                }
                Err(CmdError::Compute(e)) => {
                    eprintln!("error: {e}");
                    return 1;
                }
            };
            if let Some(c) = &cache {
                c.store(&key, &config, &out.table);
            }
            (out.table, out.summary)
        }
    };

    let out_path = config.get("out");
    if let Err(e) = output::emit(out_path, &table) {
        eprintln!("error: cannot write output: {e}");
        return 1;
    }
    let summary_text = format!("{}\n", summary.render());
    let summary_path = config.get("summary");
    if !summary_path.is_empty() {
        if let Err(e) = output::emit(summary_path, &summary_text) {
            eprintln!("error: cannot write summary: {e}");
            return 1;
        }
    } else if !out_path.is_empty() {
        // table went to a file; the summary may use stdout
        print!("{summary_text}");
    }
    0
}

fn usage_text() -> String {
    let mut s = String::from(
        "softedge - edge eigenvalue laws of unitary invariant random-matrix ensembles\n\n\
         usage: softedge <command> [--key value]...\n\n\
         common flags: --out FILE (CSV destination; stdout if omitted),\n\
         --summary FILE (JSON summary), --config FILE (key = value lines),\n\
         --cache-dir DIR (or SOFTEDGE_CACHE_DIR)\n\ncommands:\n",
    );
    for schema in SCHEMAS {
        s.push_str(&format!("  {}\n", schema.command));
        for (k, d, help) in schema.keys {
            let dflt = if d.is_empty() { String::from("unset") } else { format!("default {d}") };
            s.push_str(&format!("      --{k:<14} {help} ({dflt})\n"));
        }
    }
    s
}
