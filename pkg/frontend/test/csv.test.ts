import { test } from 'node:test'
import assert from 'node:assert/strict'

import { parseCsv, column } from '../src/csv.js'

test('parses header and numeric columns', () => {
    const table = parseCsv('a,b\n1,2\n3.5,-4e-2\n')
    assert.deepEqual(table.header, ['a', 'b'])
    assert.equal(table.rowCount, 2)
    assert.deepEqual(column(table, 'a'), [1, 3.5])
    assert.deepEqual(column(table, 'b'), [2, -0.04])
})

test('keeps raw cell text verbatim', () => {
    const table = parseCsv('x\n1.9048374180359595\n')
    assert.deepEqual(table.raw.get('x'), ['1.9048374180359595'])
    assert.equal(column(table, 'x')[0], 1.9048374180359595)
})

test('rejects ragged rows', () => {
    assert.throws(() => parseCsv('a,b\n1\n'), /row 1 has 1 cells/)
})

test('rejects non-numeric cells', () => {
    assert.throws(() => parseCsv('a\nfoo\n'), /not a number/)
})

test('rejects empty input', () => {
    assert.throws(() => parseCsv(''), /empty CSV/)
})

test('missing column lookup throws', () => {
    const table = parseCsv('a\n1\n')
    assert.throws(() => column(table, 'z'), /missing column z/)
})
