#include <stdio.h>
#include <string.h>

#include "liouville.h"

#define CHECK(cond)                                                   \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "check failed line %d: %s\n", __LINE__, #cond); \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(void) {
    LvReal *x = NULL;
    CHECK(lv_real_parse("liouville(10)", &x) == LV_STATUS_OK);

    char *digits = NULL;
    CHECK(lv_real_decimal(x, 8, &digits) == LV_STATUS_OK);
    CHECK(strcmp(digits, "0.11000100") == 0);
    lv_string_free(digits);

    char *json = NULL;
    CHECK(lv_certify(x, 3, "L", &json) == LV_STATUS_OK);
    uint32_t level = 0;
    CHECK(lv_verify(json, &level) == LV_STATUS_OK);
    CHECK(level == 3);
    lv_string_free(json);
    lv_real_free(x);

    CHECK(lv_real_parse("sqrt(2)", &x) == LV_STATUS_OK);
    LvStatus s = lv_certify(x, 4, NULL, &json);
    CHECK(s == LV_STATUS_WITNESS_SEARCH_EXHAUSTED);
    CHECK(strcmp(lv_status_name(s), "WitnessSearchExhausted") == 0);
    CHECK(lv_last_error() != NULL);
    lv_real_free(x);

    const char *polys[] = {"z", "z^2"};
    int indep = -1;
    CHECK(lv_expindep(LV_INDEP_MODE_LINEAR, polys, 2, &indep, NULL) == LV_STATUS_OK);
    CHECK(indep == 1);

    puts("ok");
    return 0;
}
