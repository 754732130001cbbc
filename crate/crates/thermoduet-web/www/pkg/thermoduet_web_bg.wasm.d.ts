/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_get_scenario_g1: (a: number) => number;
export const __wbg_get_scenario_g2: (a: number) => number;
export const __wbg_get_scenario_gamma: (a: number) => number;
export const __wbg_get_scenario_n1: (a: number) => number;
export const __wbg_get_scenario_n2: (a: number) => number;
export const __wbg_get_scenario_omega1: (a: number) => number;
export const __wbg_get_scenario_omega2: (a: number) => number;
export const __wbg_get_scenario_seed: (a: number) => number;
export const __wbg_get_scenario_sigma: (a: number) => number;
export const __wbg_get_scenario_temp1: (a: number) => number;
export const __wbg_get_scenario_temp2: (a: number) => number;
export const __wbg_scenario_free: (a: number, b: number) => void;
export const __wbg_set_scenario_g1: (a: number, b: number) => void;
export const __wbg_set_scenario_g2: (a: number, b: number) => void;
export const __wbg_set_scenario_gamma: (a: number, b: number) => void;
export const __wbg_set_scenario_n1: (a: number, b: number) => void;
export const __wbg_set_scenario_n2: (a: number, b: number) => void;
export const __wbg_set_scenario_omega1: (a: number, b: number) => void;
export const __wbg_set_scenario_omega2: (a: number, b: number) => void;
export const __wbg_set_scenario_seed: (a: number, b: number) => void;
export const __wbg_set_scenario_sigma: (a: number, b: number) => void;
export const __wbg_set_scenario_temp1: (a: number, b: number) => void;
export const __wbg_set_scenario_temp2: (a: number, b: number) => void;
export const analyticStride: () => number;
export const scenario_analyticCurves: (a: number, b: number) => [number, number, number, number];
export const scenario_classify: (a: number) => [number, number];
export const scenario_new: () => number;
export const scenario_trajectory: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const trajectoryStride: () => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
