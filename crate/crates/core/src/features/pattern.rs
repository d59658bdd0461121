//! Fixed BRIEF sampling pattern: 256 point pairs `(x1, y1, x2, y2)` relative to the
//! keypoint, drawn once from an isotropic Gaussian (sigma = 31/5) with a fixed seed,
//! rounded and clipped to the 31x31 patch. Pairs are distinct and at least 2 px apart.

pub(crate) const PATTERN: [[i8; 4]; 256] = [
    [3, -9, 3, -2], [-2, -10, -4, 7], [3, 0, -4, 0], [4, 2, 0, 11],
    [-2, -3, -1, -5], [12, -4, 3, 5], [6, 3, 8, 7], [-6, -1, -10, -7],
    [-3, -4, -6, -6], [2, 6, -5, 1], [8, 6, -3, 7], [0, -2, 2, 6],
    [-7, 7, 4, 3], [7, 4, 5, -4], [-3, 3, 2, -1], [-7, -8, -8, 2],
    [-1, 7, 12, 1], [4, -1, 5, -10], [-3, 4, -2, -2], [-5, -9, 2, -6],
    [-9, 4, 8, 5], [2, -2, -2, 1], [-5, 5, -8, -15], [-1, 1, 4, 7],
    [4, -3, -10, -5], [-5, -3, -4, -10], [11, 6, 2, 7], [-2, 11, 0, -6],
    [0, -1, -4, 15], [7, -2, -10, 4], [0, 0, -9, 5], [4, 9, 0, 2],
    [-6, 2, -3, -1], [7, -4, 3, -3], [-6, 3, 14, 3], [12, -1, 3, 11],
    [4, -6, -8, -10], [-8, 6, -15, -13], [-3, 0, 6, -1], [-3, -8, -1, -1],
    [0, 7, -3, 4], [-2, -3, -2, 7], [4, 1, 5, -6], [-7, -7, 11, 0],
    [-10, 6, -15, -15], [-8, 1, 1, 2], [-2, 1, 9, 8], [-1, 7, 11, -9],
    [-5, 15, -1, 2], [2, 12, -4, -6], [1, -5, 0, 3], [-4, -1, -7, -2],
    [-8, 1, -3, 5], [1, -9, 4, 9], [-9, 3, -9, -2], [-7, -1, 6, 7],
    [8, 3, 3, -1], [7, 2, 8, -4], [7, 1, -2, 10], [-5, 9, -10, 12],
    [2, 1, -3, -2], [6, 2, -3, 14], [1, -8, 9, 4], [5, 2, -5, -4],
    [1, 0, 3, 6], [0, -3, 2, -1], [-8, -14, -7, 1], [1, -8, 6, 2],
    [-11, 8, -8, 3], [13, 14, -2, 5], [2, 15, -7, 8], [1, 1, -4, 6],
    [0, 5, 4, 6], [2, -5, 11, 6], [6, -7, 0, 11], [2, 2, 0, 5],
    [4, -1, -9, -4], [6, -1, -2, 6], [-10, -9, -3, 4], [6, 10, -6, -1],
    [12, 6, -7, 1], [1, 1, 9, -8], [0, 3, -2, -4], [-5, 6, -8, -4],
    [8, 2, 0, 9], [4, -6, -2, 13], [4, 5, -1, 5], [1, -7, 14, 5],
    [-3, 3, 0, -8], [-1, 0, 11, -8], [2, -6, -5, -3], [-8, 7, -1, -1],
    [3, 4, 3, -7], [3, 2, 5, 9], [-5, -7, -2, 9], [-5, -3, 3, 8],
    [-9, -12, -4, -1], [4, -12, 3, -6], [-2, 0, 7, -1], [7, 9, -3, 3],
    [-1, -3, 1, 1], [2, 11, -12, -9], [10, 6, -5, 0], [5, 9, -15, 0],
    [-14, 14, -5, 0], [-4, 2, 8, 0], [5, -3, 10, -2], [8, -2, -5, -4],
    [2, -2, 0, 1], [-4, -2, -1, -5], [-7, -8, -1, 10], [15, 3, -6, 1],
    [0, -3, 2, 1], [-1, -2, 0, -10], [0, 0, -6, -1], [-3, 11, -6, -5],
    [-4, 1, -5, -9], [6, -4, -5, -6], [-7, -2, -10, -8], [-4, 8, -3, -1],
    [-2, 6, 6, 10], [-6, -7, 4, 3], [-1, -10, 11, -4], [-3, 10, -3, -3],
    [3, 5, 6, 5], [5, 4, 0, 9], [10, 0, -10, 8], [-3, -6, -9, 11],
    [-3, 4, -4, 2], [6, -5, 1, 6], [3, -11, 2, 0], [0, -6, 0, 1],
    [15, 3, 4, 0], [-1, -15, 9, 1], [-14, 1, 4, -1], [-3, -1, 1, -1],
    [1, 0, 8, 3], [3, 3, -10, -1], [5, -5, 7, -11], [-2, 4, -9, 0],
    [-3, -7, -8, 4], [-4, -4, 0, -9], [-9, 14, 3, -3], [3, -3, 4, 5],
    [-3, -8, -10, -9], [4, -14, 2, 8], [2, 11, 8, 5], [1, 8, -1, 7],
    [-3, -5, -5, 7], [-4, 1, 11, 3], [-8, -15, -4, -5], [-6, -8, 4, 11],
    [-3, 2, -10, 3], [9, 13, 0, 6], [-3, 9, -4, -11], [1, -3, 6, -2],
    [3, 2, -1, 9], [5, -2, 0, -1], [2, -1, 0, 6], [-9, -12, 7, -9],
    [8, 8, 12, 9], [4, -4, 2, 4], [0, -9, 6, 3], [-7, -2, 6, -1],
    [-6, -7, -3, 8], [4, 0, 8, 6], [6, 6, 7, -14], [-2, 9, -1, -3],
    [-7, -6, -5, -1], [3, 6, -6, 7], [2, -13, 6, -5], [9, 2, 1, 6],
    [2, 3, 0, -2], [-5, -6, 10, 2], [-2, -7, -6, -3], [-2, 2, 11, 2],
    [15, -2, 1, 5], [6, -5, 1, -6], [1, 3, 4, -3], [3, -5, -10, 4],
    [-3, 2, -10, -4], [-1, 10, -9, -1], [3, -2, 3, 2], [0, -5, 4, 2],
    [-5, -10, 11, 6], [3, -5, 3, 1], [9, 7, 12, 11], [-12, -6, 5, 1],
    [-5, -3, 1, 6], [0, -6, 5, 2], [3, 8, -15, 7], [2, -3, 8, 2],
    [5, -1, -13, 1], [12, -4, -10, -2], [-6, 2, 0, 2], [-2, -4, -5, -3],
    [4, 0, -7, -3], [-1, -1, -7, -10], [-8, -13, -8, 8], [9, 5, -1, 9],
    [6, -4, 6, 7], [-1, -4, 9, 11], [4, 5, 1, -7], [6, 5, 4, 8],
    [-5, -3, -1, -15], [-7, -13, -4, -1], [-1, 1, -9, 3], [-3, 0, 6, 5],
    [4, 1, 1, 6], [0, 8, -11, -5], [-6, 0, 0, -11], [7, 6, 1, 12],
    [-7, 2, 3, -7], [-6, -13, -9, 10], [-3, 2, -3, -6], [-2, -8, -1, 6],
    [-1, -5, -5, -3], [8, 5, -9, 7], [-11, 5, 6, 0], [8, 1, -4, 8],
    [1, 1, -12, 0], [12, 5, -5, -9], [-2, 10, 0, 3], [-5, 3, -5, -6],
    [-15, -2, -12, 7], [5, -14, 1, 2], [-6, 3, -4, 6], [-8, 2, 0, 2],
    [1, 3, 2, 6], [-2, -10, 6, 2], [2, -4, 0, 12], [12, 1, 13, 5],
    [-3, 10, -9, 6], [-1, -5, -13, 2], [-7, -5, -15, -3], [6, -6, 0, 0],
    [-2, 2, -1, -9], [12, 7, -5, 4], [2, -8, 7, 2], [2, 6, -5, 4],
    [-15, 4, 4, -3], [-5, -8, 4, 4], [-14, 7, -2, -1], [-1, 0, -4, -6],
    [-9, 3, 15, 0], [0, 2, 2, -5], [5, -9, 0, -6], [0, -12, -15, 1],
    [4, -5, 9, 10], [5, -4, 1, -13], [-1, -2, 2, -4], [-12, -1, 0, 2],
    [2, -7, 0, 5], [-12, -2, 8, -4], [-10, 4, -2, -3], [6, 6, 6, -1],
];
