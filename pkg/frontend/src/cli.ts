#!/usr/bin/env node
// render --input <csv> --kind <z_overlay|omega_overlay|trajectory|drift> --output <img>

import { KINDS, FigureKind, SchemaMismatch } from './schema.js'
import { FigureSpec, render } from './render.js'

function usage(): never {
    console.error(
        'usage: render --input <csv> --kind <' + KINDS.join('|') + '> --output <img> [--sidecar <json>] [--title <text>]'
    )
    process.exit(2)
}

function parseArgs(argv: string[]): FigureSpec {
    if (argv[0] !== 'render') usage()
    const flags = new Map<string, string>()
    for (let i = 1; i < argv.length; i += 2) {
        const key = argv[i]
        const value = argv[i + 1]
        if (!key.startsWith('--') || value === undefined) usage()
        flags.set(key.slice(2), value)
    }
    const input = flags.get('input')
    const kind = flags.get('kind')
    const output = flags.get('output')
    if (!input || !kind || !output) usage()
    if (!KINDS.includes(kind as FigureKind)) {
        console.error(`unknown kind '${kind}'; expected one of ${KINDS.join(', ')}`)
        process.exit(2)
    }
    return {
        inputCsv: input,
        kind: kind as FigureKind,
        outputImage: output,
        sidecar: flags.get('sidecar'),
        title: flags.get('title'),
    }
}

const spec = parseArgs(process.argv.slice(2))
try {
    render(spec)
    console.log(spec.outputImage)
} catch (err) {
    if (err instanceof SchemaMismatch) {
        console.error(JSON.stringify({ error: { type: 'SchemaMismatch', column: err.column, message: err.message } }))
        process.exit(1)
    }
    console.error(JSON.stringify({ error: { type: 'RenderError', message: String(err) } }))
    process.exit(1)
}
