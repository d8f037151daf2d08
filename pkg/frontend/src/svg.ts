// Minimal hand-rolled SVG plotting: enough for line overlays, scatter
// ticks and residual strips, with no rendering dependencies.

export interface Series {
    x: number[]
    y: number[]
    colour: string
    label: string
    width?: number
    dash?: string
}

export interface Panel {
    title: string
    xLabel: string
    yLabel: string
    series: Series[]
    logY?: boolean
    /** vertical marker positions, drawn as short ticks above the x axis */
    markers?: number[]
    heightFraction?: number
}

const WIDTH = 760
const MARGIN = { left: 72, right: 16, top: 34, bottom: 42 }

function extent(values: number[]): [number, number] {
    let lo = Infinity
    let hi = -Infinity
    for (const v of values) {
        if (v < lo) lo = v
        if (v > hi) hi = v
    }
    if (!Number.isFinite(lo) || !Number.isFinite(hi)) return [0, 1]
    if (lo === hi) return [lo - 1, hi + 1]
    return [lo, hi]
}

function niceTicks(lo: number, hi: number, count = 5): number[] {
    const span = hi - lo
    const step = Math.pow(10, Math.floor(Math.log10(span / count)))
    const err = (span / count) / step
    const factor = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1
    const final = step * factor
    const ticks: number[] = []
    for (let v = Math.ceil(lo / final) * final; v <= hi + 1e-12 * span; v += final) {
        ticks.push(v)
    }
    return ticks
}

function fmt(v: number): string {
    if (v === 0) return '0'
    const a = Math.abs(v)
    if (a >= 1e4 || a < 1e-3) return v.toExponential(1)
    return String(Number(v.toPrecision(6)))
}

function esc(text: string): string {
    return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
}

export function renderPanels(panels: Panel[], title: string): string {
    const total = panels.reduce((acc, p) => acc + (p.heightFraction ?? 1), 0)
    const parts: string[] = []
    let yOffset = 24
    const heights = panels.map(p => 300 * (p.heightFraction ?? 1) / (total / panels.length))
    const fullHeight = yOffset + heights.reduce((a, b) => a + b + 18, 0) + 10
    parts.push(
        `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${fullHeight}" ` +
        `font-family="Helvetica, Arial, sans-serif" font-size="12">`
    )
    parts.push(`<rect width="${WIDTH}" height="${fullHeight}" fill="white"/>`)
    parts.push(`<text x="${WIDTH / 2}" y="16" text-anchor="middle" font-size="14">${esc(title)}</text>`)
    panels.forEach((panel, idx) => {
        parts.push(panelSvg(panel, yOffset, heights[idx]))
        yOffset += heights[idx] + 18
    })
    parts.push('</svg>')
    return parts.join('\n')
}

function panelSvg(panel: Panel, top: number, height: number): string {
    const plotW = WIDTH - MARGIN.left - MARGIN.right
    const plotH = height - MARGIN.top - MARGIN.bottom + 18
    const x0 = MARGIN.left
    const y0 = top + 24

    const xs = panel.series.flatMap(s => s.x)
    let ys = panel.series.flatMap(s => s.y)
    const logY = panel.logY === true
    if (logY) {
        ys = ys.filter(v => v > 0).map(v => Math.log10(v))
        if (ys.length === 0) ys = [0, 1]
    }
    const [xLo, xHi] = extent(xs)
    const [yLo, yHi] = extent(ys)

    const sx = (v: number) => x0 + ((v - xLo) / (xHi - xLo)) * plotW
    const sy = (v: number) => {
        const value = logY ? Math.log10(v) : v
        return y0 + plotH - ((value - yLo) / (yHi - yLo)) * plotH
    }

    const parts: string[] = []
    parts.push(`<text x="${x0}" y="${y0 - 8}" font-size="13">${esc(panel.title)}</text>`)
    parts.push(
        `<rect x="${x0}" y="${y0}" width="${plotW}" height="${plotH}" fill="none" stroke="#444"/>`
    )
    for (const tx of niceTicks(xLo, xHi)) {
        const px = sx(tx)
        parts.push(`<line x1="${px}" y1="${y0 + plotH}" x2="${px}" y2="${y0 + plotH + 4}" stroke="#444"/>`)
        parts.push(`<text x="${px}" y="${y0 + plotH + 16}" text-anchor="middle">${fmt(tx)}</text>`)
    }
    const yTicks = logY
        ? niceTicks(yLo, yHi, 4).map(v => Math.pow(10, v))
        : niceTicks(yLo, yHi, 4)
    for (const ty of yTicks) {
        const py = sy(ty)
        parts.push(`<line x1="${x0 - 4}" y1="${py}" x2="${x0}" y2="${py}" stroke="#444"/>`)
        parts.push(`<text x="${x0 - 7}" y="${py + 4}" text-anchor="end">${fmt(ty)}</text>`)
    }
    for (const marker of panel.markers ?? []) {
        if (marker < xLo || marker > xHi) continue
        const px = sx(marker)
        parts.push(
            `<line x1="${px}" y1="${y0 + plotH - 14}" x2="${px}" y2="${y0 + plotH}" ` +
            `stroke="#a00" stroke-width="1.5"/>`
        )
    }
    let legendX = x0 + 10
    for (const series of panel.series) {
        const points = series.x
            .map((v, i) => ({ xv: v, yv: series.y[i] }))
            .filter(p => !logY || p.yv > 0)
            .map(p => `${sx(p.xv).toFixed(2)},${sy(p.yv).toFixed(2)}`)
            .join(' ')
        parts.push(
            `<polyline points="${points}" fill="none" stroke="${series.colour}" ` +
            `stroke-width="${series.width ?? 1.5}"${series.dash ? ` stroke-dasharray="${series.dash}"` : ''}/>`
        )
        parts.push(
            `<line x1="${legendX}" y1="${y0 + 10}" x2="${legendX + 18}" y2="${y0 + 10}" ` +
            `stroke="${series.colour}" stroke-width="2"${series.dash ? ` stroke-dasharray="${series.dash}"` : ''}/>`
        )
        parts.push(`<text x="${legendX + 22}" y="${y0 + 14}">${esc(series.label)}</text>`)
        legendX += 26 + series.label.length * 6.4
    }
    parts.push(
        `<text x="${x0 + plotW / 2}" y="${y0 + plotH + 32}" text-anchor="middle">${esc(panel.xLabel)}</text>`
    )
    parts.push(
        `<text x="${x0 - 52}" y="${y0 + plotH / 2}" text-anchor="middle" ` +
        `transform="rotate(-90 ${x0 - 52} ${y0 + plotH / 2})">${esc(panel.yLabel)}</text>`
    )
    return parts.join('\n')
}
