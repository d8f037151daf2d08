import { readFileSync, writeFileSync, existsSync } from 'fs'

import { parseCsv } from './csv.js'
import { FigureKind } from './schema.js'
import { FigureModel, Sidecar, buildFigure } from './figure.js'
import { renderPanels } from './svg.js'

export interface FigureSpec {
    inputCsv: string
    kind: FigureKind
    outputImage: string
    /** JSON sidecar path; defaults to <prefix>.json next to the input */
    sidecar?: string
    title?: string
}

function defaultSidecarPath(inputCsv: string): string | undefined {
    // the producing CLI writes <prefix>_z.csv / <prefix>_omega.csv /
    // <prefix>_trajectory.csv plus a <prefix>.json sidecar
    const match = inputCsv.match(/^(.*)_(z|omega|trajectory)\.csv$/)
    if (match) return `${match[1]}.json`
    return undefined
}

export function loadSidecar(spec: FigureSpec): Sidecar | undefined {
    const path = spec.sidecar ?? defaultSidecarPath(spec.inputCsv)
    if (path === undefined || !existsSync(path)) return undefined
    return JSON.parse(readFileSync(path, 'utf8')) as Sidecar
}

/** Parse, validate, and lay out the figure without touching the data. */
export function buildFigureFromSpec(spec: FigureSpec): FigureModel {
    const table = parseCsv(readFileSync(spec.inputCsv, 'utf8'))
    return buildFigure(spec.kind, table, loadSidecar(spec), spec.title)
}

export function render(spec: FigureSpec): FigureModel {
    const figure = buildFigureFromSpec(spec)
    writeFileSync(spec.outputImage, renderPanels(figure.panels, figure.title))
    return figure
}
