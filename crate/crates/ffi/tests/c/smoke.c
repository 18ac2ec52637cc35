#include <math.h>
#include <stdio.h>
#include <string.h>

#include "vicfluor.h"

#define CHECK(cond)                                                \
    do {                                                           \
        if (!(cond)) {                                             \
            fprintf(stderr, "check failed line %d: %s\n", __LINE__, #cond); \
            return 1;                                              \
        }                                                          \
    } while (0)

int main(void) {
    VicfluorParams p = vicfluor_params_default();
    p.omega_a = 15.0;
    p.omega_b = 11.0;

    VicfluorAtom *atom = NULL;
    CHECK(vicfluor_atom_new(&p, &atom) == VICFLUOR_STATUS_OK);
    CHECK(atom != NULL);

    double pops[4];
    CHECK(vicfluor_atom_populations(atom, pops) == VICFLUOR_STATUS_OK);
    CHECK(fabs(pops[0] + pops[1] + pops[2] + pops[3] - 1.0) < 1e-12);

    double omega[201], s[201];
    CHECK(vicfluor_atom_spectrum(atom, VICFLUOR_CHANNEL_PI, true, -40.0, 40.0, 201, omega, s, 201) == VICFLUOR_STATUS_OK);
    for (int k = 0; k < 201; ++k) {
        CHECK(s[k] >= 0.0);
        CHECK(fabs(s[k] - s[200 - k]) < 1e-12);
    }
    CHECK(vicfluor_atom_spectrum(atom, VICFLUOR_CHANNEL_PI, true, -40.0, 40.0, 201, NULL, s, 100) ==
          VICFLUOR_STATUS_BUFFER_TOO_SMALL);
    char msg[128];
    CHECK(vicfluor_last_error_message(msg, sizeof msg) > 0);
    CHECK(strstr(msg, "buffer") != NULL);

    double a[5], w[2];
    CHECK(vicfluor_dressed_weights(&p, VICFLUOR_CHANNEL_SIGMA, a, w) == VICFLUOR_STATUS_OK);
    CHECK(fabs(w[0] - 1.0) < 1e-12);
    vicfluor_atom_free(atom);

    p.gamma12 = 0.5;
    CHECK(vicfluor_atom_new(&p, &atom) == VICFLUOR_STATUS_INVALID_PARAMETER);
    CHECK(atom == NULL);
    printf("ok %s\n", vicfluor_version());
    return 0;
}
