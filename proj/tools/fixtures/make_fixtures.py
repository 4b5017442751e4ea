"""Regenerates the JSON and CSV fixtures under data/.

Usage: python3 make_fixtures.py <data-dir>
"""
import json, sys, math
def ph(s): return list(s)
def mat(n, d, m):
    return [[d if i==j else m for j in range(n)] for i in range(n)]
R_SELF, X_SELF, R_MUT, X_MUT = 0.04, 0.08, 0.015, 0.03
def line(id, f, t, phs, length, scale=1.0):
    n=len(phs)
    return {"id":id,"from_bus":f,"to_bus":t,"phases":ph(phs),
            "r":mat(n,round(R_SELF*scale,6),round(R_MUT*scale,6)),
            "x":mat(n,round(X_SELF*scale,6),round(X_MUT*scale,6)),
            "s_max":3000.0,"length":length}
def pv(d): return {k:v for k,v in d.items()}
def load(id,bus,pd,svi):
    qd={k:round(v*0.4,1) for k,v in pd.items()}
    return {"id":id,"bus":bus,"pd":pd,"qd":qd,"svi":svi}
def src(id,bus,phs,p,kind,form):
    per=round(p/len(phs),6)
    return {"id":id,"bus":bus,"pmax":{k:per for k in phs},"qmin":{k:-per for k in phs},
            "qmax":{k:per for k in phs},"can_grid_form":form,"kind":kind}
def build(wide):
    buses=[]
    def bus(id,phs,sub=False,meta=None):
        b={"id":id,"phases":ph(phs),"vmin":0.95,"vmax":1.05,"is_substation":sub}
        if meta: b["metadata"]=meta
        buses.append(b)
    bus("650","abc",True,{"name":"source"})
    for b,p in [("632","abc"),("633","abc"),("634","abc"),("645","bc"),("646","bc"),("670","abc"),("671","abc"),
                ("684","abc"),("611","c"),("652","a"),("680","abc"),("686","abc"),("692","abc"),("775","abc"),
                ("701","abc"),("702","abc"),("711","abc"),("712","abc"),("713","abc")]:
        bus(b,p)
    lines=[line("L650_632","650","632","abc",610,0.6),line("L632_670","632","670","abc",203,0.4),
           line("L670_671","670","671","abc",407,0.5),line("L632_633","632","633","abc",152),
           line("L632_645","632","645","bc",152),line("L645_646","645","646","bc",91),
           line("L684_611","684","611","c",91),line("L684_652","684","652","a",244),
           line("L680_686","680","686","abc",150),line("L692_775","692","775","abc",152),
           line("L701_702","701","702","abc",200),line("L711_712","711","712","abc",180),
           line("L712_713","712","713","abc",120)]
    sw=lambda id,f,t,r: {"id":id,"from_bus":f,"to_bus":t,"phases":ph("abc"),"normally_open":id!="sw2","risk":r,"s_max":3000.0}
    switches=[sw("sw1","671","684",87),sw("sw2","671","692",8),sw("sw3","684","680",10),
              sw("sw4","686","701",78),sw("sw5","702","711",80),sw("sw6","775","712",72)]
    loads=[load("load_632","632",{"a":98,"b":100,"c":100},0.25),
           load("load_634","634",{"a":160,"b":120,"c":120},0.5),
           load("load_645","645",{"b":170},0.25),load("load_646","646",{"b":230},0.25),
           load("load_670","670",{"a":17,"b":66,"c":117},0.25),
           load("load_671","671",{"a":385,"b":385,"c":385},0.5),
           load("load_652","652",{"a":45},3),load("load_684","684",{"b":60},2),load("load_611","611",{"c":80},4),
           load("load_680","680",{"a":4,"b":3,"c":3} if wide else {"a":0,"b":0,"c":0},2),
           load("load_692","692",{"c":70} if wide else {"c":170},1),
           load("load_775","775",{"a":135.1,"b":135.1,"c":65} if wide else {"a":485,"b":68,"c":290},3),
           load("load_701","701",{"a":10,"b":8,"c":7},6),
           load("load_711","711",{"a":40,"b":35,"c":35} if wide else {"a":30,"b":25,"c":25},1),
           load("load_713","713",{"a":50,"b":50,"c":50} if wide else {"a":40,"b":40,"c":40},2)]
    sources=[src("vsource","650","abc",15000,"substation_source",True),
             src("pv_671","671","abc",90,"solar",False),
             src("bess_684","684","abc",300,"storage",True),
             src("gen_775","775","abc",500,"generator",True),
             src("bess_702","702","abc",100,"storage",True),
             src("bess_712","712","abc",220,"storage",True)]
    xf=[{"id":"xfm1","from_bus":"633","to_bus":"634","is_distribution_xfmr":False}]
    return {"base_kv":2.401777,"base_kva":1000.0,"buses":buses,"lines":lines,"switches":switches,
            "loads":loads,"sources":sources,"transformers":xf}


def reduction15():
    """Six primary buses, three distribution transformers, three secondary buses each."""
    buses=[]
    def bus(id,phs,sub=False):
        buses.append({"id":id,"phases":ph(phs),"vmin":0.95,"vmax":1.05,"is_substation":sub})
    bus("p0","abc",True)
    for b in ["p1","p2","p3","p4","p5"]: bus(b,"abc")
    for b,p in [("s1_0","a"),("s1_1","a"),("s1_2","a"),("s2_0","abc"),("s2_1","b"),("s2_2","c"),
                ("s3_0","bc"),("s3_1","b"),("s3_2","c")]:
        bus(b,p)
    lines=[line("lp01","p0","p1","abc",300),line("lp12","p1","p2","abc",250),line("lp23","p2","p3","abc",200),
           line("lp45","p4","p5","abc",180),
           line("ls1_1","s1_0","s1_1","a",30,0.5),line("ls1_2","s1_0","s1_2","a",25,0.5),
           line("ls2_1","s2_0","s2_1","b",30,0.5),line("ls2_2","s2_0","s2_2","c",35,0.5),
           line("ls3_1","s3_0","s3_1","b",20,0.5),line("ls3_2","s3_0","s3_2","c",40,0.5)]
    switches=[{"id":"sw_a","from_bus":"p1","to_bus":"p4","phases":ph("abc"),"normally_open":False,
               "risk":12.0,"s_max":0.0}]
    loads=[load("ld_p1","p1",{"a":50,"b":50,"c":50},1.5),load("ld_p3","p3",{"a":20},0.75),
           load("ld_s1_1","s1_1",{"a":3},0.5),load("ld_s1_2","s1_2",{"a":4},0.25),
           load("ld_s2_1","s2_1",{"b":12.5},0.125),load("ld_s2_2","s2_2",{"c":8.25},0.375),
           load("ld_s3_0","s3_0",{"b":2,"c":3},0.625),load("ld_s3_1","s3_1",{"b":5.5},0.25),
           load("ld_s3_2","s3_2",{"c":7.75},1.0)]
    sources=[src("vsource","p0","abc",3000,"substation_source",True),
             src("bess_s2_0","s2_0","abc",30,"storage",True),src("bess_s2_1","s2_1","b",15,"storage",False),
             src("pv_s2_2","s2_2","c",6,"solar",False),src("pv_s3_1","s3_1","b",4,"solar",False),
             src("bess_p5","p5","abc",60,"storage",True)]
    xf=[{"id":"t1","from_bus":"p2","to_bus":"s1_0","is_distribution_xfmr":True},
        {"id":"t2","from_bus":"p3","to_bus":"s2_0","is_distribution_xfmr":True},
        {"id":"t3","from_bus":"p5","to_bus":"s3_0","is_distribution_xfmr":True}]
    net={"base_kv":2.401777,"base_kva":1000.0,"buses":buses,"lines":lines,"switches":switches,
         "loads":loads,"sources":sources,"transformers":xf}
    risk={"lp01":40,"lp12":35,"lp23":20,"lp45":60,"ls1_1":70,"ls1_2":15,"ls2_1":5,"ls2_2":25,
          "ls3_1":90,"ls3_2":10,"s3_2":95,"t2":22,"sw_a":12}
    return net, risk

def two_bus():
    """Single-phase source and load; z_base = 1 ohm so impedances read directly in per unit."""
    return {"base_kv":1.0,"base_kva":1000.0,
            "buses":[{"id":"src","phases":["a"],"vmin":0.9,"vmax":1.1,"is_substation":True},
                     {"id":"ld","phases":["a"],"vmin":0.9,"vmax":1.1,"is_substation":False}],
            "lines":[{"id":"l1","from_bus":"src","to_bus":"ld","phases":["a"],"r":[[0.01]],"x":[[0.0]],
                      "s_max":0.0,"length":100}],
            "switches":[],
            "loads":[{"id":"load_ld","bus":"ld","pd":{"a":1000.0},"qd":{"a":0.0},"svi":1.0}],
            "sources":[src("vsource","src","a",2000,"substation_source",True)],
            "transformers":[]}

def write_csv(path, values):
    with open(path,"w") as f:
        f.write("id,value\n")
        for k,v in values.items(): f.write(f"{k},{float(v)}\n")

out=sys.argv[1]

json.dump(build(False),open(out+"/ieee13.json","w"),indent=2)
json.dump(build(True),open(out+"/ieee13_widespread.json","w"),indent=2)
risk={"L650_632":91,"L632_670":40,"L670_671":55,"L632_633":20,"L632_645":62,"L645_646":33,
      "L684_611":108,"L684_652":50,"L680_686":46,"L692_775":101,"L701_702":65,"L711_712":108,"L712_713":30,
      "sw1":87,"sw2":8,"sw3":10,"sw4":78,"sw5":80,"sw6":72,"xfm1":12}
write_csv(out+"/ieee13_risk.csv", risk)
write_csv(out+"/ieee13_svi.csv", {l["id"]: l["svi"] for l in build(False)["loads"]})

net, rrisk = reduction15()
json.dump(net,open(out+"/reduction15.json","w"),indent=2)
write_csv(out+"/reduction15_risk.csv", rrisk)
write_csv(out+"/reduction15_svi.csv", {l["id"]: l["svi"] for l in net["loads"]})

json.dump(two_bus(),open(out+"/two_bus.json","w"),indent=2)

bad=two_bus()
bad["loads"].append({"id":"load_99","bus":"bus99","pd":{"a":5.0},"qd":{"a":1.0},"svi":0.5})
json.dump(bad,open(out+"/dangling_bus.json","w"),indent=2)
