#!/usr/bin/env node
// Minimal z3 CLI replacement backed by the z3-solver WASM build.
// Usage: node z3smt2.js [ignored z3-style flags...] file.smt2
// Reads the SMT-LIB2 script, executes it, prints the solver output.
'use strict';
const fs = require('fs');

async function main() {
  const args = process.argv.slice(2).filter((a) => !a.startsWith('-'));
  if (args.length !== 1) {
    process.stderr.write('usage: z3smt2.js file.smt2\n');
    process.exit(2);
  }
  const text = fs.readFileSync(args[0], 'utf8');
  const { init } = require('z3-solver');
  const { Z3 } = await init();
  const cfg = Z3.mk_config();
  const ctx = Z3.mk_context(cfg);
  const out = await Z3.eval_smtlib2_string(ctx, text);
  process.stdout.write(out);
  process.exit(0);
}

main().catch((e) => {
  process.stderr.write(String(e) + '\n');
  process.exit(3);
});
