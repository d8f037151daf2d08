import { Table } from './csv.js'

export type FigureKind = 'z_overlay' | 'omega_overlay' | 'trajectory' | 'drift'

export const KINDS: FigureKind[] = ['z_overlay', 'omega_overlay', 'trajectory', 'drift']

/** Raised when the CSV does not match the schema of the requested kind. */
export class SchemaMismatch extends Error {
    readonly column: string
    constructor(column: string, kind: FigureKind) {
        super(`input CSV is missing column '${column}' required by kind '${kind}'`)
        this.name = 'SchemaMismatch'
        this.column = column
    }
}

const REQUIRED: Record<FigureKind, string[]> = {
    z_overlay: ['beta', 'z_kernel', 'z_direct', 'rel_err'],
    omega_overlay: ['energy', 'omega_kernel', 'omega_direct', 'abs_err'],
    trajectory: ['sigma', 'q0', 'p0', 't', 'pi_t', 'H_value'],
    drift: ['sigma', 'pi_t', 'H_value'],
}

export function requiredColumns(kind: FigureKind): string[] {
    return REQUIRED[kind]
}

export function validateSchema(table: Table, kind: FigureKind): void {
    for (const name of REQUIRED[kind]) {
        if (!table.columns.has(name)) {
            throw new SchemaMismatch(name, kind)
        }
    }
}
