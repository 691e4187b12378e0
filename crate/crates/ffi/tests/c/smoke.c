#include <math.h>
#include <stdio.h>
#include "planar_limits.h"

int main(void) {
    PllNetwork *net = NULL;
    if (pll_network_grid(4, &net) != PLL_STATUS_OK) {
        fprintf(stderr, "grid: %s\n", pll_last_error_message());
        return 1;
    }
    size_t a = 0, z = 15;
    double r = 0.0;
    if (pll_effective_resistance(net, &a, 1, &z, 1, &r) != PLL_STATUS_OK) {
        fprintf(stderr, "reff: %s\n", pll_last_error_message());
        return 1;
    }
    size_t far = 99;
    if (pll_effective_resistance(net, &a, 1, &far, 1, &r) != PLL_STATUS_INVALID_ARGUMENT ||
        pll_last_error_message() == NULL) {
        return 2;
    }
    pll_effective_resistance(net, &a, 1, &z, 1, &r);
    char *json = NULL;
    pll_network_to_json(net, &json);
    pll_string_free(json);
    pll_network_free(net);
    printf("%.12f\n", r);
    return fabs(r - 13.0 / 7.0) < 1e-12 ? 0 : 3;
}
