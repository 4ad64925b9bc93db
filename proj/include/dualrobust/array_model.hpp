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

#ifndef dualrobust_array_model_H
#define dualrobust_array_model_H

#include <armadillo>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace dualrobust
{
    using cx = std::complex<double>;

    inline constexpr double pi = 3.14159265358979323846;

    inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
    inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }

    // watts = 10^((dBm - 30) / 10)
    double dbm_to_watts(double dbm);
    double watts_to_dbm(double watts);

    // Uniform linear array. Only the spacing-to-wavelength ratio enters any formula and it is fixed at 1/2.
    class ArrayGeometry
    {
    public:
        explicit ArrayGeometry(arma::uword num_antennas);

        arma::uword num_antennas() const { return n_; }
        double element_spacing_ratio() const { return 0.5; }

    private:
        arma::uword n_;
    };

    // Transmit matrix W = [w_1 .. w_K | w_{K+1} .. w_{K+M}].
    // Columns 0..K-1 carry user data (and are also seen by the sensing receiver),
    // columns K..K+M-1 are dedicated sensing streams.
    class Beamformer
    {
    public:
        Beamformer(arma::cx_mat matrix, arma::uword num_users);

        const arma::cx_mat &matrix() const { return W_; }
        arma::uword num_antennas() const { return W_.n_rows; }
        arma::uword num_columns() const { return W_.n_cols; }
        arma::uword num_users() const { return K_; }
        arma::uword num_sensing_streams() const { return W_.n_cols - K_; }

        // ||W||_F^2
        double power() const;

        // R_w = W W^H
        arma::cx_mat covariance() const;

        // W with column k removed (the interference-generating columns for user k)
        arma::cx_mat interferers(arma::uword k) const;

        // Scale so that ||W||_F^2 == target_power. Throws on an all-zero matrix.
        Beamformer scaled_to_power(double target_power) const;

    private:
        arma::cx_mat W_;
        arma::uword K_;
    };

    // Estimated user channels with their bounded-error radii and noise powers (linear watts).
    struct ChannelSet
    {
        std::vector<arma::cx_vec> estimates;
        std::vector<double> radii;
        std::vector<double> noise_powers;

        arma::uword num_users() const { return estimates.size(); }

        // eps_k = varpi * ||h_hat_k||_2, varpi in [0, 1)
        static ChannelSet from_error_coefficient(std::vector<arma::cx_vec> estimates, double varpi,
                                                 std::vector<double> noise_powers);

        // Throws std::invalid_argument when the set is inconsistent with the geometry.
        void validate(const ArrayGeometry &geometry) const;
    };

    // PL(d) = reference_loss_db + 10 * exponent * log10(d)  [dB]
    struct PathLossModel
    {
        double reference_loss_db = 30.0;
        double exponent = 3.0;

        double loss_db(double distance_m) const;
        double linear_gain(double distance_m) const; // 10^(-PL/10)
    };

    // Entry n equals exp(-j * pi * n * sin(theta)).
    arma::cx_vec steering_vector(double theta, const ArrayGeometry &geometry);

    // P(theta) = a^H(theta) R_w a(theta)
    double beampattern_gain(const Beamformer &bf, double theta);
    double beampattern_gain(const arma::cx_mat &covariance, double theta);

    // Line-of-sight channel sqrt(g) a(theta). With a finite Rician K-factor and an RNG, a
    // scattered CN(0, I) component is mixed in at power fraction 1 / (K + 1).
    arma::cx_vec synth_channel(double distance_m, double theta, const PathLossModel &model,
                               const ArrayGeometry &geometry);
    arma::cx_vec synth_channel(double distance_m, double theta, const PathLossModel &model,
                               const ArrayGeometry &geometry, double rician_k_factor, std::mt19937_64 &rng);

    // SINR of user k (0-based) seen through channel h; all other columns interfere.
    double user_sinr(const Beamformer &bf, const arma::cx_vec &channel, arma::uword k, double sigma2);

    // log2(1 + sinr)
    inline double rate_bits(double sinr) { return std::log2(1.0 + sinr); }

} // namespace dualrobust

#endif
