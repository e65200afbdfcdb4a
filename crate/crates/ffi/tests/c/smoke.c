#include <stdio.h>
#include <string.h>

#include "snfc.h"

#define CHECK(expr)                                                        \
    do {                                                                   \
        if (!(expr)) {                                                     \
            fprintf(stderr, "failed: %s (%s)\n", #expr,                    \
                    snfc_last_error_message());                            \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    SnfcNetwork *net = NULL;
    CHECK(snfc_network_builtin("butterfly", &net) == SNFC_STATUS_OK);
    size_t c_min = 0, upper = 0;
    CHECK(snfc_c_min(net, &c_min) == SNFC_STATUS_OK && c_min == 2);
    CHECK(snfc_upper_bound(net, 1, &upper) == SNFC_STATUS_OK && upper == 1);

    SnfcCode *code = NULL;
    CHECK(snfc_construct(net, 1, 0, NULL, 0, &code) == SNFC_STATUS_OK);
    bool ok = false;
    char *report = NULL;
    CHECK(snfc_verify(code, 1, true, 0, &ok, &report) == SNFC_STATUS_OK && ok);
    CHECK(strstr(report, "\"computable\":true") != NULL);
    snfc_string_free(report);
    snfc_code_free(code);

    SnfcNetwork *n1 = NULL;
    CHECK(snfc_network_builtin("n1", &n1) == SNFC_STATUS_OK);
    CHECK(snfc_construct(n1, 1, 0, NULL, 0, &code) == SNFC_STATUS_RATE_INFEASIBLE);
    CHECK(strstr(snfc_last_error_message(), "RATE_INFEASIBLE") != NULL);

    snfc_network_free(n1);
    snfc_network_free(net);
    puts("ok");
    return 0;
}
