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

#include "dualrobust/array_model.hpp"

#include <stdexcept>
#include <string>

namespace dualrobust
{
    double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

    double watts_to_dbm(double watts)
    {
        if (watts <= 0.0)
            throw std::invalid_argument("watts_to_dbm: power must be positive");
        return 10.0 * std::log10(watts) + 30.0;
    }

    ArrayGeometry::ArrayGeometry(arma::uword num_antennas) : n_(num_antennas)
    {
        if (num_antennas < 1)
            throw std::invalid_argument("ArrayGeometry: at least one antenna is required");
    }

    Beamformer::Beamformer(arma::cx_mat matrix, arma::uword num_users) : W_(std::move(matrix)), K_(num_users)
    {
        if (W_.n_rows == 0)
            throw std::invalid_argument("Beamformer: empty matrix");
        if (K_ > W_.n_cols)
            throw std::invalid_argument("Beamformer: more users than columns");
    }

    double Beamformer::power() const
    {
        return std::real(arma::accu(W_ % arma::conj(W_)));
    }

    arma::cx_mat Beamformer::covariance() const
    {
        arma::cx_mat R = W_ * W_.t();
        return 0.5 * (R + R.t());
    }

    arma::cx_mat Beamformer::interferers(arma::uword k) const
    {
        if (k >= W_.n_cols)
            throw std::out_of_range("Beamformer::interferers: column index out of range");
        arma::cx_mat out = W_;
        out.shed_col(k);
        return out;
    }

    Beamformer Beamformer::scaled_to_power(double target_power) const
    {
        const double p = power();
        if (p <= 0.0)
            throw std::invalid_argument("Beamformer::scaled_to_power: zero beamformer");
        return Beamformer(W_ * std::sqrt(target_power / p), K_);
    }

    ChannelSet ChannelSet::from_error_coefficient(std::vector<arma::cx_vec> estimates, double varpi,
                                                  std::vector<double> noise_powers)
    {
        if (varpi < 0.0 || varpi >= 1.0)
            throw std::invalid_argument("ChannelSet: error coefficient must lie in [0, 1)");
        ChannelSet out;
        out.radii.reserve(estimates.size());
        for (const auto &h : estimates)
            out.radii.push_back(varpi * arma::norm(h, 2));
        out.estimates = std::move(estimates);
        out.noise_powers = std::move(noise_powers);
        return out;
    }

    void ChannelSet::validate(const ArrayGeometry &geometry) const
    {
        if (radii.size() != estimates.size() || noise_powers.size() != estimates.size())
            throw std::invalid_argument("ChannelSet: estimates, radii and noise powers differ in length");
        for (std::size_t k = 0; k < estimates.size(); ++k)
        {
            if (estimates[k].n_elem != geometry.num_antennas())
                throw std::invalid_argument("ChannelSet: channel " + std::to_string(k) + " has wrong length");
            if (!(radii[k] >= 0.0))
                throw std::invalid_argument("ChannelSet: negative error radius");
            if (!(noise_powers[k] > 0.0))
                throw std::invalid_argument("ChannelSet: noise power must be positive");
        }
    }

    double PathLossModel::loss_db(double distance_m) const
    {
        if (!(distance_m > 0.0))
            throw std::invalid_argument("PathLossModel: distance must be positive");
        return reference_loss_db + 10.0 * exponent * std::log10(distance_m);
    }

    double PathLossModel::linear_gain(double distance_m) const
    {
        return std::pow(10.0, -loss_db(distance_m) / 10.0);
    }

    arma::cx_vec steering_vector(double theta, const ArrayGeometry &geometry)
    {
        const arma::uword n = geometry.num_antennas();
        const double step = 2.0 * pi * geometry.element_spacing_ratio() * std::sin(theta);
        arma::cx_vec a(n);
        for (arma::uword i = 0; i < n; ++i)
            a(i) = std::polar(1.0, -step * double(i));
        return a;
    }

    double beampattern_gain(const arma::cx_mat &covariance, double theta)
    {
        if (covariance.n_rows != covariance.n_cols)
            throw std::invalid_argument("beampattern_gain: covariance must be square");
        const arma::cx_vec a = steering_vector(theta, ArrayGeometry(covariance.n_rows));
        return std::max(0.0, std::real(arma::cdot(a, covariance * a)));
    }

    double beampattern_gain(const Beamformer &bf, double theta)
    {
        return beampattern_gain(bf.covariance(), theta);
    }

    arma::cx_vec synth_channel(double distance_m, double theta, const PathLossModel &model,
                               const ArrayGeometry &geometry)
    {
        return std::sqrt(model.linear_gain(distance_m)) * steering_vector(theta, geometry);
    }

    arma::cx_vec synth_channel(double distance_m, double theta, const PathLossModel &model,
                               const ArrayGeometry &geometry, double rician_k_factor, std::mt19937_64 &rng)
    {
        if (!(rician_k_factor >= 0.0))
            throw std::invalid_argument("synth_channel: Rician K-factor must be nonnegative");
        const double g = model.linear_gain(distance_m);
        if (std::isinf(rician_k_factor))
            return std::sqrt(g) * steering_vector(theta, geometry);

        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        arma::cx_vec scatter(geometry.num_antennas());
        for (auto &v : scatter)
            v = cx(normal(rng), normal(rng));
        const double los = std::sqrt(rician_k_factor / (rician_k_factor + 1.0));
        const double nlos = std::sqrt(1.0 / (rician_k_factor + 1.0));
        return std::sqrt(g) * (los * steering_vector(theta, geometry) + nlos * scatter);
    }

    double user_sinr(const Beamformer &bf, const arma::cx_vec &channel, arma::uword k, double sigma2)
    {
        if (k >= bf.num_users())
            throw std::out_of_range("user_sinr: user index out of range");
        if (channel.n_elem != bf.num_antennas())
            throw std::invalid_argument("user_sinr: channel length does not match the array");
        const arma::cx_rowvec proj = channel.t() * bf.matrix();
        double signal = std::norm(proj(k));
        double interference = 0.0;
        for (arma::uword j = 0; j < proj.n_elem; ++j)
            if (j != k)
                interference += std::norm(proj(j));
        return signal / (interference + sigma2);
    }

} // namespace dualrobust
