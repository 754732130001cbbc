/* tslint:disable */
/* eslint-disable */

export class Scenario {
    free(): void;
    [Symbol.dispose](): void;
    analyticCurves(n_points: number): Float64Array;
    /**
     * Regime report as plain text.
     */
    classify(): string;
    constructor();
    trajectory(t_max: number, n_points: number, subsystem: number): Float64Array;
    g1: number;
    g2: number;
    gamma: number;
    n1: number;
    n2: number;
    omega1: number;
    omega2: number;
    seed: number;
    sigma: number;
    temp1: number;
    temp2: number;
}

export function analyticStride(): number;

export function trajectoryStride(): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_get_scenario_g1: (a: number) => number;
    readonly __wbg_get_scenario_g2: (a: number) => number;
    readonly __wbg_get_scenario_gamma: (a: number) => number;
    readonly __wbg_get_scenario_n1: (a: number) => number;
    readonly __wbg_get_scenario_n2: (a: number) => number;
    readonly __wbg_get_scenario_omega1: (a: number) => number;
    readonly __wbg_get_scenario_omega2: (a: number) => number;
    readonly __wbg_get_scenario_seed: (a: number) => number;
    readonly __wbg_get_scenario_sigma: (a: number) => number;
    readonly __wbg_get_scenario_temp1: (a: number) => number;
    readonly __wbg_get_scenario_temp2: (a: number) => number;
    readonly __wbg_scenario_free: (a: number, b: number) => void;
    readonly __wbg_set_scenario_g1: (a: number, b: number) => void;
    readonly __wbg_set_scenario_g2: (a: number, b: number) => void;
    readonly __wbg_set_scenario_gamma: (a: number, b: number) => void;
    readonly __wbg_set_scenario_n1: (a: number, b: number) => void;
    readonly __wbg_set_scenario_n2: (a: number, b: number) => void;
    readonly __wbg_set_scenario_omega1: (a: number, b: number) => void;
    readonly __wbg_set_scenario_omega2: (a: number, b: number) => void;
    readonly __wbg_set_scenario_seed: (a: number, b: number) => void;
    readonly __wbg_set_scenario_sigma: (a: number, b: number) => void;
    readonly __wbg_set_scenario_temp1: (a: number, b: number) => void;
    readonly __wbg_set_scenario_temp2: (a: number, b: number) => void;
    readonly analyticStride: () => number;
    readonly scenario_analyticCurves: (a: number, b: number) => [number, number, number, number];
    readonly scenario_classify: (a: number) => [number, number];
    readonly scenario_new: () => number;
    readonly scenario_trajectory: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly trajectoryStride: () => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
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
