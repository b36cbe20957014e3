/**
 * Byte-level fixtures written by the reference implementations (numpy 2.2
 * for .npy/.npz, the safetensors library for .safetensors), captured as
 * base64 so the readers are checked against real files, not just against
 * this package's own writers.
 *
 * Contents: alpha is a (2, 3) float32 array, beta is (4,), gamma is (2, 2, 2)
 * in the safetensors file and a () scalar 0.5 in the npz archive; the
 * standalone scalar npy holds 0.625.
 */

export const NPY_2X3_B64 =
  'k05VTVBZAQB2AHsnZGVzY3InOiAnPGY0JywgJ2ZvcnRyYW5fb3JkZXInOiBGYWxzZSwgJ3NoYXBlJzogKDIsIDMpLCB9ICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgIAp+hmg/ZS4JP8OAP7/7aic/k7kyP4fSmb4=';

export const NPY_SCALAR_B64 =
  'k05VTVBZAQB2AHsnZGVzY3InOiAnPGY0JywgJ2ZvcnRyYW5fb3JkZXInOiBGYWxzZSwgJ3NoYXBlJzogKCksIH0gICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgICAgIAoAACA/';

export const NPZ_B64 =
  'UEsDBBQAAAAIAAAAIQDP2P5eXwAAAJgAAAAJABQAYWxwaGEubnB5AQAQAJgAAAAAAAAAXwAAAAAAAACb7BfqGxDJyFDGUK2eklqcXKRupaBuk2airqOgnpZfVFKUmBefX5SSChJ3S8wpTgWKF2ckFqQC+RpGOgrGmjoKtQpkA666tgz7VD1O+8MN9vt/Z6nbT95pZN9+aeY+AFBLAwQUAAAACAAAACEAR6gSKVUAAACQAAAACAAUAGJldGEubnB5AQAQAJAAAAAAAAAAVQAAAAAAAACb7BfqGxDJyFDGUK2eklqcXKRupaBuk2airqOgnpZfVFKUmBefX5SSChJ3S8wpTgWKF2ckFqQC+RomOpo6CrUKFACuM2932VS+DrQz5li6b1FppR0AUEsDBBQAAAAIAAAAIQBrxByWRgAAAIQAAAAJABQAZ2FtbWEubnB5AQAQAIQAAAAAAAAARgAAAAAAAACb7BfqGxDJyFDGUK2eklqcXKRupaBuk2airqOgnpZfVFKUmBefX5SSChJ3S8wpTgWKF2ckFqQC+RqaOgq1ChQBLgYGBnsAUEsBAhQDFAAAAAgAAAAhAM/Y/l5fAAAAmAAAAAkAAAAAAAAAAAAAAIABAAAAAGFscGhhLm5weVBLAQIUAxQAAAAIAAAAIQBHqBIpVQAAAJAAAAAIAAAAAAAAAAAAAACAAZoAAABiZXRhLm5weVBLAQIUAxQAAAAIAAAAIQBrxByWRgAAAIQAAAAJAAAAAAAAAAAAAACAASkBAABnYW1tYS5ucHlQSwUGAAAAAAMAAwCkAAAAqgEAAAAA';

export const SAFETENSORS_B64 =
  'uAAAAAAAAAB7ImFscGhhIjp7ImR0eXBlIjoiRjMyIiwic2hhcGUiOlsyLDNdLCJkYXRhX29mZnNldHMiOlswLDI0XX0sImJldGEiOnsiZHR5cGUiOiJGMzIiLCJzaGFwZSI6WzRdLCJkYXRhX29mZnNldHMiOlsyNCw0MF19LCJnYW1tYSI6eyJkdHlwZSI6IkYzMiIsInNoYXBlIjpbMiwyLDJdLCJkYXRhX29mZnNldHMiOls0MCw3Ml19fSAgfoZoP2UuCT/DgD+/+2onP5O5Mj+H0pm+zO26PHnrUT4zCKW+onV5PnYQ7j6Q4Dg/XRGmvs3QEL4m4kA+D4xzP6sRWz+WDmK/';

export const ALPHA_VALUES = [
  0.9083021879196167, 0.5358641743659973, -0.7480584979057312, 0.6539761424064636,
  0.6981441378593445, -0.30043432116508484,
];

export const BETA_VALUES = [
  0.022818468511104584, 0.20499981939792633, -0.3223281800746918, 0.24361279606819153,
];

export const GAMMA_VALUES = [
  0.46496933698654175, 0.7221765518188477, -0.3243512213230133, -0.14142151176929474,
  0.18836268782615662, 0.9513558745384216, 0.8557383418083191, -0.8830350637435913,
];
