export interface Table {
    header: string[]
    /** parsed values per column, keyed by header name */
    columns: Map<string, number[]>
    /** raw cell text per column, exactly as read from the file */
    raw: Map<string, string[]>
    rowCount: number
}

export function parseCsv(text: string): Table {
    const lines = text.split(/\r?\n/).filter(line => line.length > 0)
    if (lines.length === 0) {
        throw new Error('empty CSV file')
    }
    const header = lines[0].split(',')
    const columns = new Map<string, number[]>()
    const raw = new Map<string, string[]>()
    for (const name of header) {
        columns.set(name, [])
        raw.set(name, [])
    }
    for (let i = 1; i < lines.length; i++) {
        const cells = lines[i].split(',')
        if (cells.length !== header.length) {
            throw new Error(`row ${i} has ${cells.length} cells, header has ${header.length}`)
        }
        for (let c = 0; c < header.length; c++) {
            const value = Number(cells[c])
            if (!Number.isFinite(value)) {
                throw new Error(`row ${i}, column ${header[c]}: not a number: ${cells[c]}`)
            }
            columns.get(header[c])!.push(value)
            raw.get(header[c])!.push(cells[c])
        }
    }
    return { header, columns, raw, rowCount: lines.length - 1 }
}

export function column(table: Table, name: string): number[] {
    const values = table.columns.get(name)
    if (values === undefined) {
        throw new Error(`missing column ${name}`)
    }
    return values
}
