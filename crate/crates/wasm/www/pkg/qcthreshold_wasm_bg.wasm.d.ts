/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_comparison_free: (a: number, b: number) => void;
export const __wbg_constants_free: (a: number, b: number) => void;
export const __wbg_get_constants_c0: (a: number) => number;
export const __wbg_get_constants_c1: (a: number) => number;
export const __wbg_get_constants_c2: (a: number) => number;
export const __wbg_get_constants_c3: (a: number) => number;
export const __wbg_get_constants_c4: (a: number) => number;
export const __wbg_get_constants_c5: (a: number) => number;
export const __wbg_get_constants_c_bar: (a: number) => number;
export const __wbg_get_constants_c_cl: (a: number) => number;
export const __wbg_get_constants_c_qu: (a: number) => number;
export const __wbg_get_constants_c_total: (a: number) => number;
export const __wbg_get_constants_tau2: (a: number) => number;
export const __wbg_set_constants_c0: (a: number, b: number) => void;
export const __wbg_set_constants_c1: (a: number, b: number) => void;
export const __wbg_set_constants_c2: (a: number, b: number) => void;
export const __wbg_set_constants_c3: (a: number, b: number) => void;
export const __wbg_set_constants_c4: (a: number, b: number) => void;
export const __wbg_set_constants_c5: (a: number, b: number) => void;
export const __wbg_set_constants_c_bar: (a: number, b: number) => void;
export const __wbg_set_constants_c_cl: (a: number, b: number) => void;
export const __wbg_set_constants_c_qu: (a: number, b: number) => void;
export const __wbg_set_constants_c_total: (a: number, b: number) => void;
export const __wbg_set_constants_tau2: (a: number, b: number) => void;
export const boundConstants: (a: number) => [number, number, number];
export const compare: (a: number, b: number, c: number) => [number, number, number];
export const comparison_classical: (a: number) => [number, number];
export const comparison_discrepancy: (a: number) => number;
export const comparison_dp: (a: number) => number;
export const comparison_l1: (a: number) => number;
export const comparison_p0: (a: number) => number;
export const comparison_quantum: (a: number) => [number, number];
export const finalPdf: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
