// SPDX-License-Identifier: Apache-2.0
//
// dualrobust: dual-robust ISAC transmit beamforming
// Copyright (C) 2026 The dualrobust authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef dualrobust_affine_H
#define dualrobust_affine_H

#include <armadillo>
#include <complex>
#include <utility>
#include <vector>

namespace dualrobust
{
    // Real affine function  constant + sum_i coef_i x_i  of the real decision vector x.
    class LinearForm
    {
    public:
        using Term = std::pair<int, double>;

        LinearForm() = default;
        explicit LinearForm(double constant) : constant_(constant) {}

        static LinearForm variable(int index, double coef = 1.0);

        double constant() const { return constant_; }
        const std::vector<Term> &terms() const { return terms_; } // sorted by index, unique

        double evaluate(const arma::vec &x) const;
        double coefficient(int index) const;

        LinearForm &operator+=(const LinearForm &rhs);
        LinearForm &operator-=(const LinearForm &rhs);
        LinearForm &operator*=(double s);

        friend LinearForm operator+(LinearForm a, const LinearForm &b) { return a += b; }
        friend LinearForm operator-(LinearForm a, const LinearForm &b) { return a -= b; }
        friend LinearForm operator*(LinearForm a, double s) { return a *= s; }
        friend LinearForm operator*(double s, LinearForm a) { return a *= s; }
        friend LinearForm operator+(LinearForm a, double c) { return a += LinearForm(c); }
        friend LinearForm operator-(LinearForm a, double c) { return a -= LinearForm(c); }
        friend LinearForm operator-(LinearForm a) { return a *= -1.0; }

    private:
        double constant_ = 0.0;
        std::vector<Term> terms_;
    };

    // Complex-valued affine function of the real decision vector x.
    class ComplexAffine
    {
    public:
        using cx = std::complex<double>;
        using Term = std::pair<int, cx>;

        ComplexAffine() = default;
        explicit ComplexAffine(cx constant) : constant_(constant) {}

        static ComplexAffine variable(int index, cx coef = 1.0);

        cx constant() const { return constant_; }
        const std::vector<Term> &terms() const { return terms_; }

        cx evaluate(const arma::vec &x) const;
        ComplexAffine conj() const;
        LinearForm real() const;
        LinearForm imag() const;

        ComplexAffine &operator+=(const ComplexAffine &rhs);
        ComplexAffine &operator-=(const ComplexAffine &rhs);
        ComplexAffine &operator*=(cx s);

        friend ComplexAffine operator+(ComplexAffine a, const ComplexAffine &b) { return a += b; }
        friend ComplexAffine operator-(ComplexAffine a, const ComplexAffine &b) { return a -= b; }
        friend ComplexAffine operator*(ComplexAffine a, cx s) { return a *= s; }
        friend ComplexAffine operator*(cx s, ComplexAffine a) { return a *= s; }

    private:
        cx constant_ = 0.0;
        std::vector<Term> terms_;
    };

    using AffineVector = std::vector<ComplexAffine>;

    // sum_i conj(u_i) v_i with a constant u
    ComplexAffine inner(const arma::cx_vec &u, const AffineVector &v);

    // Hermitian matrix whose entries are affine in x. Only the lower triangle is stored and the diagonal is
    // kept real, so every evaluation is exactly Hermitian whatever x is.
    class HermitianAffine
    {
    public:
        explicit HermitianAffine(arma::uword n = 0);

        arma::uword size() const { return n_; }

        // Lower-triangle access, row >= col. Setting a diagonal entry keeps its real part only.
        const ComplexAffine &lower(arma::uword row, arma::uword col) const;
        void set(arma::uword row, arma::uword col, const ComplexAffine &value);
        void add(arma::uword row, arma::uword col, const ComplexAffine &value);

        arma::cx_mat evaluate(const arma::vec &x) const;

        // D M D with D = diag(d), d > 0; PSD-ness is unchanged.
        HermitianAffine congruence(const arma::vec &d) const;

    private:
        arma::uword index(arma::uword row, arma::uword col) const;

        arma::uword n_;
        std::vector<ComplexAffine> entries_;
    };

} // namespace dualrobust

#endif
