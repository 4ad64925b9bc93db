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

#include "dualrobust/affine.hpp"

#include <algorithm>
#include <stdexcept>

namespace dualrobust
{
    namespace
    {
        // Merge two index-sorted term lists, scaling the second by `scale`; exact zeros are dropped.
        template <typename T>
        std::vector<std::pair<int, T>> merge_terms(const std::vector<std::pair<int, T>> &a,
                                                   const std::vector<std::pair<int, T>> &b, T scale)
        {
            std::vector<std::pair<int, T>> out;
            out.reserve(a.size() + b.size());
            auto ia = a.begin(), ib = b.begin();
            while (ia != a.end() || ib != b.end())
            {
                if (ib == b.end() || (ia != a.end() && ia->first < ib->first))
                    out.push_back(*ia++);
                else if (ia == a.end() || ib->first < ia->first)
                {
                    out.emplace_back(ib->first, scale * ib->second);
                    ++ib;
                }
                else
                {
                    T v = ia->second + scale * ib->second;
                    if (v != T(0))
                        out.emplace_back(ia->first, v);
                    ++ia;
                    ++ib;
                }
            }
            return out;
        }
    } // namespace

    LinearForm LinearForm::variable(int index, double coef)
    {
        LinearForm f;
        if (index < 0)
            throw std::invalid_argument("LinearForm: negative variable index");
        if (coef != 0.0)
            f.terms_.emplace_back(index, coef);
        return f;
    }

    double LinearForm::evaluate(const arma::vec &x) const
    {
        double v = constant_;
        for (const auto &[i, c] : terms_)
            v += c * x(i);
        return v;
    }

    double LinearForm::coefficient(int index) const
    {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), index,
                                   [](const Term &t, int i) { return t.first < i; });
        return (it != terms_.end() && it->first == index) ? it->second : 0.0;
    }

    LinearForm &LinearForm::operator+=(const LinearForm &rhs)
    {
        constant_ += rhs.constant_;
        terms_ = merge_terms(terms_, rhs.terms_, 1.0);
        return *this;
    }

    LinearForm &LinearForm::operator-=(const LinearForm &rhs)
    {
        constant_ -= rhs.constant_;
        terms_ = merge_terms(terms_, rhs.terms_, -1.0);
        return *this;
    }

    LinearForm &LinearForm::operator*=(double s)
    {
        constant_ *= s;
        if (s == 0.0)
            terms_.clear();
        for (auto &t : terms_)
            t.second *= s;
        return *this;
    }

    ComplexAffine ComplexAffine::variable(int index, cx coef)
    {
        ComplexAffine f;
        if (index < 0)
            throw std::invalid_argument("ComplexAffine: negative variable index");
        if (coef != cx(0.0))
            f.terms_.emplace_back(index, coef);
        return f;
    }

    ComplexAffine::cx ComplexAffine::evaluate(const arma::vec &x) const
    {
        cx v = constant_;
        for (const auto &[i, c] : terms_)
            v += c * x(i);
        return v;
    }

    ComplexAffine ComplexAffine::conj() const
    {
        ComplexAffine out(std::conj(constant_));
        out.terms_ = terms_;
        for (auto &t : out.terms_)
            t.second = std::conj(t.second);
        return out;
    }

    LinearForm ComplexAffine::real() const
    {
        LinearForm out(constant_.real());
        for (const auto &[i, c] : terms_)
            out += LinearForm::variable(i, c.real());
        return out;
    }

    LinearForm ComplexAffine::imag() const
    {
        LinearForm out(constant_.imag());
        for (const auto &[i, c] : terms_)
            out += LinearForm::variable(i, c.imag());
        return out;
    }

    ComplexAffine &ComplexAffine::operator+=(const ComplexAffine &rhs)
    {
        constant_ += rhs.constant_;
        terms_ = merge_terms(terms_, rhs.terms_, cx(1.0));
        return *this;
    }

    ComplexAffine &ComplexAffine::operator-=(const ComplexAffine &rhs)
    {
        constant_ -= rhs.constant_;
        terms_ = merge_terms(terms_, rhs.terms_, cx(-1.0));
        return *this;
    }

    ComplexAffine &ComplexAffine::operator*=(cx s)
    {
        constant_ *= s;
        if (s == cx(0.0))
            terms_.clear();
        for (auto &t : terms_)
            t.second *= s;
        return *this;
    }

    ComplexAffine inner(const arma::cx_vec &u, const AffineVector &v)
    {
        if (u.n_elem != v.size())
            throw std::invalid_argument("inner: length mismatch");
        ComplexAffine out;
        for (arma::uword i = 0; i < u.n_elem; ++i)
            out += std::conj(u(i)) * v[i];
        return out;
    }

    HermitianAffine::HermitianAffine(arma::uword n) : n_(n), entries_(n * (n + 1) / 2) {}

    arma::uword HermitianAffine::index(arma::uword row, arma::uword col) const
    {
        if (row >= n_ || col > row)
            throw std::out_of_range("HermitianAffine: only the lower triangle is addressable");
        // column-major lower triangle
        return col * n_ - col * (col - 1) / 2 + (row - col);
    }

    const ComplexAffine &HermitianAffine::lower(arma::uword row, arma::uword col) const
    {
        return entries_[index(row, col)];
    }

    void HermitianAffine::set(arma::uword row, arma::uword col, const ComplexAffine &value)
    {
        auto &e = entries_[index(row, col)];
        if (row == col)
        {
            const LinearForm re = value.real();
            ComplexAffine d(re.constant());
            for (const auto &[i, c] : re.terms())
                d += ComplexAffine::variable(i, c);
            e = d;
        }
        else
            e = value;
    }

    void HermitianAffine::add(arma::uword row, arma::uword col, const ComplexAffine &value)
    {
        ComplexAffine sum = lower(row, col) + value;
        set(row, col, sum);
    }

    HermitianAffine HermitianAffine::congruence(const arma::vec &d) const
    {
        if (d.n_elem != n_ || arma::any(d <= 0.0))
            throw std::invalid_argument("HermitianAffine::congruence: need one positive factor per row");
        HermitianAffine out(n_);
        for (arma::uword c = 0; c < n_; ++c)
            for (arma::uword r = c; r < n_; ++r)
                out.entries_[index(r, c)] = (d(r) * d(c)) * entries_[index(r, c)];
        return out;
    }

    arma::cx_mat HermitianAffine::evaluate(const arma::vec &x) const
    {
        arma::cx_mat out(n_, n_);
        for (arma::uword c = 0; c < n_; ++c)
        {
            out(c, c) = entries_[index(c, c)].evaluate(x).real();
            for (arma::uword r = c + 1; r < n_; ++r)
            {
                const auto v = entries_[index(r, c)].evaluate(x);
                out(r, c) = v;
                out(c, r) = std::conj(v);
            }
        }
        return out;
    }

} // namespace dualrobust
