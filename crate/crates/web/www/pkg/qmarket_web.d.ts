/* tslint:disable */
/* eslint-disable */

/**
 * A density sampled on a phase grid, row-major with `q` as the row.
 */
export class Field {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    values(): Float64Array;
    readonly mass: number;
    readonly np: number;
    readonly nq: number;
    readonly p_max: number;
    readonly p_min: number;
    readonly q_max: number;
    readonly q_min: number;
}

export function gibbsWeights(beta: number, n_max: number, hbar_e: number, big_theta: number): Float64Array;

export function thermalField(beta: number, hbar_e: number, big_theta: number): Field;

export function wignerField(level: number, hbar_e: number, big_theta: number): Field;

export function zenoRates(frequencies: Float64Array, ticks: number, seed: bigint): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_field_free: (a: number, b: number) => void;
    readonly field_mass: (a: number) => number;
    readonly field_np: (a: number) => number;
    readonly field_nq: (a: number) => number;
    readonly field_p_max: (a: number) => number;
    readonly field_p_min: (a: number) => number;
    readonly field_q_max: (a: number) => number;
    readonly field_q_min: (a: number) => number;
    readonly field_values: (a: number) => [number, number];
    readonly gibbsWeights: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly thermalField: (a: number, b: number, c: number) => [number, number, number];
    readonly wignerField: (a: number, b: number, c: number) => [number, number, number];
    readonly zenoRates: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
