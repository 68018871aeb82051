#include <stdio.h>
#include <string.h>
#include "adelia.h"

int main(void) {
    AdeliaField *k = NULL;
    if (adelia_field_new(7, &k) != ADELIA_STATUS_OK || adelia_field_order(k) != 7) return 1;
    AdeliaReport *r = NULL;
    if (adelia_residue_curve(k, "1/(x^2+1)", "x^3+x", 1, &r) != ADELIA_STATUS_OK) return 2;
    if (!adelia_report_pass(r) || strstr(adelia_report_json(r), "residue_theorem_curve") == NULL) return 3;
    adelia_report_free(r);
    if (adelia_residue_curve(k, "x^^2", "x", 1, &r) != ADELIA_STATUS_PARSE) return 4;
    if (strstr(adelia_last_error(), "position") == NULL) return 5;
    adelia_field_free(k);
    int8_t s = 0;
    if (adelia_hilbert_symbol(-1, 1, -1, 1, 0, &s) != ADELIA_STATUS_OK || s != -1) return 6;
    printf("ok %s\n", adelia_version());
    return 0;
}
