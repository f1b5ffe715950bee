/* tslint:disable */
/* eslint-disable */

/**
 * Final momentum marginals of one spectral run per side.
 */
export class Comparison {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly classical: Float64Array;
    /**
     * `|<exp(-p^2)>_quantum - <exp(-p^2)>_classical|`
     */
    readonly discrepancy: number;
    readonly dp: number;
    readonly l1: number;
    readonly p0: number;
    readonly quantum: Float64Array;
}

export class Constants {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    c0: number;
    c1: number;
    c2: number;
    c3: number;
    c4: number;
    c5: number;
    c_bar: number;
    c_cl: number;
    c_qu: number;
    c_total: number;
    tau2: number;
}

export function boundConstants(tau2: number): Constants;

/**
 * Evolves both sides at `D = d_scaled h^{4/3}` through the standard schedule.
 */
export function compare(h: number, d_scaled: number, substeps: number): Comparison;

/**
 * Closed-form final momentum density at standard durations, sampled at
 * `p0 + j dp` for `j < n`.
 */
export function finalPdf(which: string, tau2: number, p0: number, dp: number, n: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_comparison_free: (a: number, b: number) => void;
    readonly __wbg_constants_free: (a: number, b: number) => void;
    readonly __wbg_get_constants_c0: (a: number) => number;
    readonly __wbg_get_constants_c1: (a: number) => number;
    readonly __wbg_get_constants_c2: (a: number) => number;
    readonly __wbg_get_constants_c3: (a: number) => number;
    readonly __wbg_get_constants_c4: (a: number) => number;
    readonly __wbg_get_constants_c5: (a: number) => number;
    readonly __wbg_get_constants_c_bar: (a: number) => number;
    readonly __wbg_get_constants_c_cl: (a: number) => number;
    readonly __wbg_get_constants_c_qu: (a: number) => number;
    readonly __wbg_get_constants_c_total: (a: number) => number;
    readonly __wbg_get_constants_tau2: (a: number) => number;
    readonly __wbg_set_constants_c0: (a: number, b: number) => void;
    readonly __wbg_set_constants_c1: (a: number, b: number) => void;
    readonly __wbg_set_constants_c2: (a: number, b: number) => void;
    readonly __wbg_set_constants_c3: (a: number, b: number) => void;
    readonly __wbg_set_constants_c4: (a: number, b: number) => void;
    readonly __wbg_set_constants_c5: (a: number, b: number) => void;
    readonly __wbg_set_constants_c_bar: (a: number, b: number) => void;
    readonly __wbg_set_constants_c_cl: (a: number, b: number) => void;
    readonly __wbg_set_constants_c_qu: (a: number, b: number) => void;
    readonly __wbg_set_constants_c_total: (a: number, b: number) => void;
    readonly __wbg_set_constants_tau2: (a: number, b: number) => void;
    readonly boundConstants: (a: number) => [number, number, number];
    readonly compare: (a: number, b: number, c: number) => [number, number, number];
    readonly comparison_classical: (a: number) => [number, number];
    readonly comparison_discrepancy: (a: number) => number;
    readonly comparison_dp: (a: number) => number;
    readonly comparison_l1: (a: number) => number;
    readonly comparison_p0: (a: number) => number;
    readonly comparison_quantum: (a: number) => [number, number];
    readonly finalPdf: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
