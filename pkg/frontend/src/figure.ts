import { Table, column } from './csv.js'
import { FigureKind, validateSchema } from './schema.js'
import { Panel } from './svg.js'

export interface Sidecar {
    eigenvalues?: number[]
    [key: string]: unknown
}

export interface FigureModel {
    kind: FigureKind
    title: string
    panels: Panel[]
    /**
     * Residual values exactly as parsed from the CSV residual column;
     * the renderer plots these and never recomputes them.
     */
    residuals: number[]
    residualsRaw: string[]
}

const KERNEL_COLOUR = '#1965b0'
const DIRECT_COLOUR = '#dc050c'
const RESIDUAL_COLOUR = '#555555'

function qpColumns(table: Table, prefix: 'q' | 'p'): string[] {
    return table.header.filter(name => new RegExp(`^${prefix}\\d+$`).test(name))
}

export function buildFigure(kind: FigureKind, table: Table, sidecar?: Sidecar, title?: string): FigureModel {
    validateSchema(table, kind)
    if (kind === 'z_overlay') {
        const beta = column(table, 'beta')
        const residuals = column(table, 'rel_err')
        const panels: Panel[] = [
            {
                title: 'partition function: kernel route vs direct trace',
                xLabel: 'beta',
                yLabel: 'Z(beta)',
                logY: true,
                series: [
                    { x: beta, y: column(table, 'z_kernel'), colour: KERNEL_COLOUR, label: 'kernel route' },
                    { x: beta, y: column(table, 'z_direct'), colour: DIRECT_COLOUR, label: 'direct trace', dash: '6 4' },
                ],
            },
            residualPanel(beta, residuals, 'beta', 'relative error'),
        ]
        return {
            kind,
            title: title ?? 'canonical partition function overlay',
            panels,
            residuals,
            residualsRaw: table.raw.get('rel_err')!,
        }
    }
    if (kind === 'omega_overlay') {
        const energy = column(table, 'energy')
        const residuals = column(table, 'abs_err')
        const overlay: Panel = {
            title: 'density of states: kernel route vs broadened spectrum',
            xLabel: 'energy',
            yLabel: 'Omega_sigma(E)',
            series: [
                { x: energy, y: column(table, 'omega_kernel'), colour: KERNEL_COLOUR, label: 'kernel route' },
                { x: energy, y: column(table, 'omega_direct'), colour: DIRECT_COLOUR, label: 'direct sum', dash: '6 4' },
            ],
            markers: sidecar?.eigenvalues ?? [],
        }
        return {
            kind,
            title: title ?? 'density of states overlay',
            panels: [overlay, residualPanel(energy, residuals, 'energy', 'absolute error')],
            residuals,
            residualsRaw: table.raw.get('abs_err')!,
        }
    }
    if (kind === 'trajectory') {
        const qNames = qpColumns(table, 'q')
        const pNames = qpColumns(table, 'p')
        const sigma = column(table, 'sigma')
        const phase: Panel = {
            title: 'phase portrait',
            xLabel: qNames[0],
            yLabel: pNames[0],
            series: [
                { x: column(table, qNames[0]), y: column(table, pNames[0]), colour: KERNEL_COLOUR, label: `${pNames[0]} vs ${qNames[0]}` },
            ],
        }
        const history: Panel = {
            title: 'coordinate history',
            xLabel: 'sigma',
            yLabel: 'q, p',
            series: [
                ...qNames.map((name, i) => ({
                    x: sigma, y: column(table, name), colour: KERNEL_COLOUR, label: name,
                    dash: i > 0 ? '4 3' : undefined,
                })),
                ...pNames.map((name, i) => ({
                    x: sigma, y: column(table, name), colour: DIRECT_COLOUR, label: name,
                    dash: i > 0 ? '4 3' : undefined,
                })),
            ],
        }
        return {
            kind,
            title: title ?? 'classical trajectory',
            panels: [phase, history],
            residuals: [],
            residualsRaw: [],
        }
    }
    // drift: |H + pi_t| along the trajectory
    const sigma = column(table, 'sigma')
    const h = column(table, 'H_value')
    const piT = column(table, 'pi_t')
    const drift = h.map((v, i) => Math.abs(v + piT[i]))
    const panel: Panel = {
        title: 'constraint drift |H + pi_t|',
        xLabel: 'sigma',
        yLabel: '|H + pi_t|',
        series: [{ x: sigma, y: drift, colour: RESIDUAL_COLOUR, label: 'drift' }],
    }
    return {
        kind,
        title: title ?? 'constraint drift',
        panels: [panel],
        residuals: [],
        residualsRaw: [],
    }
}

function residualPanel(x: number[], residuals: number[], xLabel: string, yLabel: string): Panel {
    return {
        title: 'residual (verbatim from the CSV)',
        xLabel,
        yLabel,
        series: [{ x, y: residuals, colour: RESIDUAL_COLOUR, label: yLabel }],
        heightFraction: 0.55,
    }
}
