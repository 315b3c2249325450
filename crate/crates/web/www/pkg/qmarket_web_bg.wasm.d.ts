/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_field_free: (a: number, b: number) => void;
export const field_mass: (a: number) => number;
export const field_np: (a: number) => number;
export const field_nq: (a: number) => number;
export const field_p_max: (a: number) => number;
export const field_p_min: (a: number) => number;
export const field_q_max: (a: number) => number;
export const field_q_min: (a: number) => number;
export const field_values: (a: number) => [number, number];
export const gibbsWeights: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const thermalField: (a: number, b: number, c: number) => [number, number, number];
export const wignerField: (a: number, b: number, c: number) => [number, number, number];
export const zenoRates: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_start: () => void;
