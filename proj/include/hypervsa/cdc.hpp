#pragma once

namespace hypervsa::cdc {

struct CdcQuery {
    double n_features = 0.0;
    double dim = 0.0;
    int group_bits = 3;  // n in G(2^n)

    void validate() const;
};

struct CdcResult {
    double depth_real = 0.0;
    long long depth_rounded = 0;  // round half-up of depth_real
};

// log2(N) + 1 + (3/2) log2(D) (1 + log2(D))
CdcResult cdc_binary_hdc(const CdcQuery& q);

// 3 n log2(N) + 24 log2(D)
CdcResult cdc_group(const CdcQuery& q);

// 91 + 96 log2(N) + (3/2) log2(D) (1 + log2(D))
CdcResult cdc_perceptron(const CdcQuery& q);

}  // namespace hypervsa::cdc
