// Copyright 2026 The emudistill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Plain-array 4x4 arithmetic for test oracles. Deliberately independent of
// Eigen so library results are checked against a separate code path.
#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace oracle {

using M4 = std::array<std::array<double, 4>, 4>;
using M2 = std::array<std::array<double, 2>, 2>;

inline M4 zero4() {
    M4 m{};
    return m;
}

inline M4 identity4() {
    M4 m{};
    for (int i = 0; i < 4; ++i) {
        m[i][i] = 1.0;
    }
    return m;
}

inline M4 mul(const M4 &a, const M4 &b) {
    M4 c{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) {
                s += a[i][k] * b[k][j];
            }
            c[i][j] = s;
        }
    }
    return c;
}

inline M4 transpose(const M4 &a) {
    M4 t{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            t[i][j] = a[j][i];
        }
    }
    return t;
}

inline M4 add(const M4 &a, const M4 &b, double sb = 1.0) {
    M4 c{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            c[i][j] = a[i][j] + sb * b[i][j];
        }
    }
    return c;
}

inline M4 scale(const M4 &a, double s) {
    return add(zero4(), a, s);
}

/// Gauss-Jordan with partial pivoting.
inline M4 inverse(M4 a) {
    M4 inv = identity4();
    for (int c = 0; c < 4; ++c) {
        int p = c;
        for (int r = c + 1; r < 4; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[p][c])) {
                p = r;
            }
        }
        std::swap(a[c], a[p]);
        std::swap(inv[c], inv[p]);
        const double d = a[c][c];
        for (int j = 0; j < 4; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (int r = 0; r < 4; ++r) {
            if (r == c) {
                continue;
            }
            const double f = a[r][c];
            for (int j = 0; j < 4; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

inline double det(M4 a) {
    double d = 1.0;
    for (int c = 0; c < 4; ++c) {
        int p = c;
        for (int r = c + 1; r < 4; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[p][c])) {
                p = r;
            }
        }
        if (p != c) {
            std::swap(a[c], a[p]);
            d = -d;
        }
        d *= a[c][c];
        if (a[c][c] == 0.0) {
            return 0.0;
        }
        for (int r = c + 1; r < 4; ++r) {
            const double f = a[r][c] / a[c][c];
            for (int j = c; j < 4; ++j) {
                a[r][j] -= f * a[c][j];
            }
        }
    }
    return d;
}

inline double det2(const M4 &a, int r0, int c0) {
    return a[r0][c0] * a[r0 + 1][c0 + 1] - a[r0][c0 + 1] * a[r0 + 1][c0];
}

/// Local rotation with blocks [[cos, sin], [-sin, cos]].
inline M4 rotation(double phi_a, double phi_b) {
    M4 r{};
    r[0][0] = std::cos(phi_a);
    r[0][1] = std::sin(phi_a);
    r[1][0] = -std::sin(phi_a);
    r[1][1] = std::cos(phi_a);
    r[2][2] = std::cos(phi_b);
    r[2][3] = std::sin(phi_b);
    r[3][2] = -std::sin(phi_b);
    r[3][3] = std::cos(phi_b);
    return r;
}

inline M4 rotate(const M4 &g, double phi_a, double phi_b) {
    M4 r = rotation(phi_a, phi_b);
    return mul(mul(r, g), transpose(r));
}

}  // namespace oracle
