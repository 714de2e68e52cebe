#include <math.h>
#include <stdio.h>
#include <string.h>

#include "fockcycle.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    FcBasis *basis = NULL;
    CHECK(fc_basis_new(1, 5, &basis) == FC_STATUS_OK);
    CHECK(fc_basis_len(basis) == 6);
    double xi[1] = {1.0};
    double m = 0.0;
    CHECK(fc_moment(basis, xi, 1, 6, &m) == FC_STATUS_OK);
    CHECK(fabs(m - 15.0) < 1e-10);
    fc_basis_free(basis);

    double re = 0.0, im = 0.0;
    size_t cap = 0;
    CHECK(fc_ps_trace(2.0, FC_CAP_AUTO, &re, &im, &cap) == FC_STATUS_OK);
    CHECK(fabs(re - exp(-2.0)) < 1e-6);
    CHECK(fc_ps_trace(2.0, 2, &re, &im, NULL) == FC_STATUS_TRUNCATION_BUDGET);
    CHECK(strlen(fc_last_error_message()) > 0);

    FcRep *rep = NULL;
    CHECK(fc_rep_from_json("{\"generators\": 1, \"relators\": [[1, 1]], \"matrices\": [[[-1.0]]]}", &rep) ==
          FC_STATUS_OK);
    size_t z = 0, b = 0, h = 9;
    CHECK(fc_rep_h1(rep, &z, &b, &h) == FC_STATUS_OK);
    CHECK(z == 1 && b == 1 && h == 0);
    fc_rep_free(rep);
    CHECK(fc_rep_from_json("not json", &rep) == FC_STATUS_INVALID_INPUT);
    return 0;
}
