// Copyright 2026 The qwqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Brute-force reference implementations used only by tests. They build full
// dense operators straight from the definitions and share no code with the
// library's steppers, closed forms or samplers.

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qwqkd/walk.hpp"

namespace qwqkd::oracle {

using Matrix = Eigen::MatrixXcd;

Matrix coin_2x2(double theta, double phi);
Matrix flip_2x2(Flip flip);
// Dense shift on C^P (x) C^2 from its action on basis kets.
Matrix shift(int positions, ShiftSense sense);
// I_P (x) c.
Matrix coin_layer(int positions, const Matrix& c);
// U^t (I (x) F) by repeated multiplication.
Matrix walk_operator(int positions, const Matrix& coin, const Matrix& flip, long steps,
                     StepOrder order, ShiftSense sense);
Matrix walk_operator(const WalkParams& params);

// min over 1..t_max of the largest |entry|^2 of the full walk operator;
// returns (c, t) with the first t attaining the minimum within 1e-12.
std::pair<double, long> brute_force_c(const WalkParams& params, long t_max);

// X^m Z^n with X|k> = |k+1>, Z|k> = exp(i pi k / P) |k>.
Matrix pauli_xz(int m, int n, int positions);

// Pr(A = i, B = j) from the full bipartite density matrix: |Phi> on
// d (x) d, channel sum_mn p U_mn (.) U_mn^dag on B, then Alice measures in
// conj(basis) and Bob in basis.
Eigen::MatrixXd density_joint(const Matrix& basis, const std::vector<double>& table,
                              int positions);

// Zero crossing of log2(1/c) - 2[h(Q) + Q log2(d-1)] by a linear scan with
// step `step`.
double scan_qmax(double c, int positions, double step = 1e-6);

// Key-symbol error probability of one two-way transport through a uniform
// Pauli channel of weight E_r applied on both passes, from full density
// matrices.
double two_pass_error(const WalkParams& walk, int l, Coin s, int r, double error_weight);

// Average over the listed walks and every basis state of sum_x p_x^2, where
// p is the computational-basis distribution of the walk state.
double mean_collision(const std::vector<WalkParams>& walks);

// Agreement rate when Alice's half of |Phi> is measured in `a`, Bob's in
// conj(a), after Bob's half was measured in Z by Eve.
double bell_agreement_after_z(const Matrix& a);

}  // namespace qwqkd::oracle
