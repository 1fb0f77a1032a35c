/* tslint:disable */
/* eslint-disable */

/**
 * Coefficient polynomial table for family `S`, `A`, `P`, `Q` or `R`, one line per entry.
 */
export function coefficient_table(family: string, max_index: number): string;

/**
 * Closed form of the mixed trigonometric-hyperbolic integral with exponent
 * `4m - 1`, its value, the quadrature value and their relative difference.
 */
export function integral_check(m: number, prec_bits: number): string;

/**
 * Decimal value of the hyperbolic series `F_{p,m}(y)`.
 */
export function series_value(family: string, p: number, m: number, y: string, prec_bits: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly coefficient_table: (a: number, b: number, c: number) => [number, number, number, number];
    readonly integral_check: (a: number, b: number) => [number, number, number, number];
    readonly series_value: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
