/* Reads a representation from a file and prints the criterion report. */
#include <stdio.h>
#include <stdlib.h>

#include "blockcode.h"

static char *read_file(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    rewind(f);
    char *buf = malloc((size_t)n + 1);
    if (buf && fread(buf, 1, (size_t)n, f) != (size_t)n) {
        free(buf);
        buf = NULL;
    }
    if (buf) buf[n] = '\0';
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc != 2) {
        fprintf(stderr, "usage: %s REPRESENTATION.json\n", argv[0]);
        return 2;
    }
    char *text = read_file(argv[1]);
    if (!text) {
        perror(argv[1]);
        return 2;
    }
    BcRepresentation *rep = NULL;
    BcStatus status = bc_representation_parse(text, &rep);
    free(text);
    if (status != BC_STATUS_OK) {
        fprintf(stderr, "parse failed: %s\n", bc_last_error());
        return 2;
    }
    char *report = NULL;
    status = bc_check(rep, BC_MU_MODE_STANDARD, &report);
    if (report) {
        puts(report);
        bc_string_free(report);
    }
    bc_representation_free(rep);
    return status == BC_STATUS_OK ? 0 : status == BC_STATUS_REFUTED ? 1 : 2;
}
